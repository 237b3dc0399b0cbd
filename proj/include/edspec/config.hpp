#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edspec/models.hpp"
#include "edspec/table.hpp"

namespace edspec {

/// Experiment configuration with every knob defaulted to the published
/// values where one exists. Parsed from JSON with strict unknown-key
/// rejection; the full schema is documented in the README.
struct ExperimentConfig {
  struct Model {
    XxzParams xxz;                  // h supplied per sweep point
    BoseHubbardParams bose_hubbard; // U supplied per sweep point (U/J grid)
  };

  struct Sweep {
    std::vector<double> h_values = {0.01, 0.05, 0.1, 0.2, 0.4, 0.7};
    std::vector<double> u_over_j_values = {0.02, 0.08, 0.4, 1.8, 5.0, 9.0};
    std::vector<std::uint64_t> seeds = {1};
    int realizations = 1;  // disorder realizations per seed
  };

  struct Analysis {
    int poly_degree = 12;
    double trim_frac = 0.05;
    int nnsd_bins = 50;
    int ratio_bins = 20;
    double numvar_l_min = 1.0;
    double numvar_l_max = 25.0;
    int numvar_l_points = 25;
    double delta_eps = 0.02;
    double delta_omega = 0.05;
    double gauss_delta_omega = 0.1;
    std::array<double, 2> ebar_window = {-0.5, 0.5};
    std::optional<std::array<double, 2>> fit_window;  // auto when absent
    int offdiag_pair_count = 200;
    int offdiag_bins = 101;
    int block_size_small = 21;
    int block_count_small = 700;
    int edge_drop = 1;
    std::vector<int> block_sizes_large = {512, 1024};
    std::vector<int> block_counts_large = {32, 16};
    double block_trim_frac = 0.03;
    int bh_block_size = 50;
    int bh_block_count = 100;
    int bh_edge_drop = 1;
    double sff_t_min = 1e-2;
    double sff_t_max = 1e3;
    int sff_t_points = 400;
    int sff_smooth_window = 11;
    int entropy_states = 100;
    int block_entropy_states = 20;
    int block_entropy_size = 1024;
    int magnitude_block_size = 64;
    int min_bin_count = 10;
  };

  struct Output {
    std::string directory = "out";
    TableFormat format = TableFormat::csv;
  };

  Model model;
  Sweep sweep;
  Analysis analysis;
  Output output;

  /// Stable hash of the full configuration, recorded in table metadata.
  std::uint64_t hash() const;
  std::string canonical() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace edspec
