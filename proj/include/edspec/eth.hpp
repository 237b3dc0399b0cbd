#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "edspec/linalg.hpp"

namespace edspec {

/// eps_n = (E_n - E_min) / (E_max - E_min), so the spectrum maps onto [0, 1].
std::vector<double> normalized_energies(std::span<const double> evals);

/// Diagonal matrix elements against normalized energy, with the windowed
/// microcanonical average and the mean absolute deviation from it. Both
/// curves are evaluated at every eigenstate over |eps_a - eps_n| <= delta_eps.
struct DiagonalProfile {
  std::vector<double> eps;
  std::vector<double> values;     // Z_aa
  std::vector<double> micro_avg;
  std::vector<double> delta_mic;  // >= 0 pointwise
  double window_halfwidth = 0.02;
};

DiagonalProfile diagonal_profile(const EigenbasisObservable& obs,
                                 double delta_eps = 0.02);

/// All strictly-upper-triangle elements among pair_count consecutive
/// eigenstates centered on the spectrum midpoint, with their energy
/// difference omega = E_b - E_a > 0 and mean energy (E_a + E_b) / 2.
struct OffDiagonalSample {
  std::vector<double> values;
  std::vector<double> omega;
  std::vector<double> ebar;
  std::size_t first_state = 0;
  std::size_t state_count = 0;
};

OffDiagonalSample offdiag_window(const EigenbasisObservable& obs,
                                 std::size_t pair_count = 200);

/// Scaled off-diagonal variance L * D * mean|Z_ab|^2 binned in omega for
/// pairs whose mean energy lies in ebar_window, plus the exponential-decay
/// fit of the tail. Bins holding fewer than min_bin_count pairs are dropped.
struct VarianceProfile {
  std::vector<double> omega;            // bin centers
  std::vector<double> scaled_variance;  // L * D * mean |Z_ab|^2
  std::vector<std::size_t> counts;
  DecayFit decay;
};

VarianceProfile variance_profile(
    const EigenbasisObservable& obs, int sites,
    std::pair<double, double> ebar_window = {-0.5, 0.5},
    double delta_omega = 0.05,
    std::optional<std::pair<double, double>> fit_window = std::nullopt,
    std::size_t min_bin_count = 10);

/// Gaussianity indicator mean(|Z_ab|^2) / mean(|Z_ab|)^2 per omega bin;
/// equals pi/2 for Gaussian matrix elements. Bins below min_bin_count
/// samples are omitted.
std::vector<std::pair<double, double>> gaussianity_ratio(
    const EigenbasisObservable& obs,
    std::pair<double, double> ebar_window = {-0.5, 0.5},
    double delta_omega = 0.1, std::size_t min_bin_count = 10);

}  // namespace edspec
