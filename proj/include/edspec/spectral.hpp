#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace edspec {

/// Spectrum rescaled to unit mean level density by a polynomial fit of the
/// integrated density (staircase), with a fraction of levels dropped at
/// each spectral edge.
struct UnfoldedSpectrum {
  std::vector<double> values;  // ascending, mean spacing ~ 1
  double trim_frac = 0.0;
  int poly_degree = 0;

  std::vector<double> spacings() const;
};

UnfoldedSpectrum unfold(std::span<const double> evals, int poly_degree = 12,
                        double trim_frac = 0.05);

/// Normalized histogram: sum(density * bin width) = 1.
struct HistogramData {
  std::vector<double> bin_edges;  // size bins + 1
  std::vector<double> densities;  // size bins
  std::size_t sample_count = 0;

  double center(std::size_t bin) const {
    return 0.5 * (bin_edges[bin] + bin_edges[bin + 1]);
  }
};

HistogramData histogram(std::span<const double> samples, int bins, double lo,
                        double hi);

/// Nearest-neighbor spacing distribution of an unfolded spectrum over
/// [0, max spacing].
HistogramData nnsd(const UnfoldedSpectrum& unfolded, int bins);

/// Maximum-likelihood Brody parameter on [0, 1]; gamma = 0 is Poisson,
/// gamma = 1 the Wigner surmise.
struct BrodyFit {
  double gamma = 0.0;
  double log_likelihood = 0.0;
  bool quality_warning = false;  // likelihood flat across [0, 1]
};

BrodyFit brody_fit(std::span<const double> spacings);

/// Brody density P(s; gamma) with its exact normalization constant.
double brody_pdf(double s, double gamma);

/// Level number variance via windows of length l slid in steps of l/4.
std::vector<std::pair<double, double>> number_variance(
    const UnfoldedSpectrum& unfolded, std::span<const double> l_grid);

/// Consecutive-spacing ratios r = min(s_i, s_{i+1}) / max(s_i, s_{i+1});
/// degenerate pairs produce r = 0. No unfolding required.
std::vector<double> spacing_ratios(std::span<const double> evals);

double mean(std::span<const double> values);

enum class ReferenceCurve {
  nnsd_poisson,  // exp(-s)
  nnsd_wigner,   // (pi s / 2) exp(-pi s^2 / 4)
  pr_poisson,    // 2 / (1 + r)^2 on [0, 1]
  pr_goe,        // (27/4) (r + r^2) / (1 + r + r^2)^(5/2) on [0, 1]
  nv_poisson,    // l
  nv_goe,        // (2/pi^2) [ln(2 pi l) + gamma_e + 1 - pi^2/8]
};

std::vector<double> reference_curve(ReferenceCurve kind,
                                    std::span<const double> grid);

/// |sum_m exp(i E_m t)|^2 / N per window, averaged across windows.
/// Expects unfolded eigenvalues so the Heisenberg time sits at 2 pi.
struct SffCurve {
  std::vector<double> times;
  std::vector<double> values;
  std::size_t window_size = 0;
  std::size_t window_count = 0;
};

SffCurve sff(const std::vector<std::vector<double>>& eval_windows,
             std::span<const double> t_grid);

/// Whole spectrum as a single window plus a centered moving average over
/// the (log-spaced) time grid; smooth_window must be odd.
std::pair<SffCurve, SffCurve> sff_single_realization(
    std::span<const double> unfolded_evals, std::span<const double> t_grid,
    int smooth_window);

/// floor(n / window_size) contiguous non-overlapping windows, remainder
/// discarded symmetrically at the spectral edges.
std::vector<std::vector<double>> partition_spectrum(
    std::span<const double> evals, std::size_t window_size);

std::vector<double> log_time_grid(double t_min, double t_max, int points);

}  // namespace edspec
