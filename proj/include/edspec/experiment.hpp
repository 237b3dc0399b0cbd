#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edspec/config.hpp"
#include "edspec/linalg.hpp"

namespace edspec {

/// Command-line overrides applied on top of the config file.
struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<int> system_size;
};

/// Subcommands: spectrum, eth, submatrix, sff, entropy, bose-hubbard, all.
/// Runs the requested analyses over the sweep, one table file per figure
/// family and sweep point, and returns the files written. Spectra are
/// cached on disk per (model, params, seed), so later subcommands reuse
/// earlier eigendecompositions.
std::vector<std::filesystem::path> run_experiment(const std::string& subcommand,
                                                  ExperimentConfig config,
                                                  const RunOptions& options = {});

/// Resolved worker count: explicit value, else EDSPEC_THREADS, else the
/// hardware concurrency.
int effective_threads(std::optional<int> flag);

/// On-disk spectrum store; one binary file per key, written atomically.
class SpectrumCache {
 public:
  explicit SpectrumCache(std::filesystem::path dir);

  std::optional<Spectrum> load(const std::string& key) const;
  void store(const std::string& key, const Spectrum& spectrum) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace edspec
