#include "edspec/eth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edspec/errors.hpp"

namespace edspec {

std::vector<double> normalized_energies(std::span<const double> evals) {
  if (evals.size() < 2) {
    throw std::invalid_argument("normalized_energies: needs at least 2 levels");
  }
  const double lo = evals.front();
  const double hi = evals.back();
  if (!(hi > lo)) {
    throw std::invalid_argument("normalized_energies: degenerate spectrum");
  }
  std::vector<double> eps(evals.size());
  for (std::size_t i = 0; i < evals.size(); ++i) {
    eps[i] = (evals[i] - lo) / (hi - lo);
  }
  return eps;
}

DiagonalProfile diagonal_profile(const EigenbasisObservable& obs,
                                 double delta_eps) {
  const auto dim = static_cast<std::size_t>(obs.dim());
  if (dim < 100) {
    throw std::invalid_argument("diagonal_profile: needs dim >= 100");
  }
  if (!(delta_eps > 0.0)) {
    throw std::invalid_argument("diagonal_profile: delta_eps must be positive");
  }
  DiagonalProfile profile;
  profile.window_halfwidth = delta_eps;
  profile.eps = normalized_energies(
      std::span<const double>(obs.evals.data(), dim));
  profile.values.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    profile.values[i] = obs.mat(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(i));
  }
  profile.micro_avg.resize(dim);
  profile.delta_mic.resize(dim);

  // eps ascends with the eigenvalue index, so each window is a contiguous
  // index range found by binary search.
  const auto begin = profile.eps.begin();
  const auto end = profile.eps.end();
  for (std::size_t n = 0; n < dim; ++n) {
    const auto first = std::lower_bound(begin, end, profile.eps[n] - delta_eps);
    const auto last = std::upper_bound(begin, end, profile.eps[n] + delta_eps);
    const auto i0 = static_cast<std::size_t>(first - begin);
    const auto i1 = static_cast<std::size_t>(last - begin);
    double sum = 0.0;
    for (std::size_t i = i0; i < i1; ++i) sum += profile.values[i];
    const double avg = sum / static_cast<double>(i1 - i0);
    double abs_dev = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
      abs_dev += std::abs(profile.values[i] - avg);
    }
    profile.micro_avg[n] = avg;
    profile.delta_mic[n] = abs_dev / static_cast<double>(i1 - i0);
  }
  return profile;
}

OffDiagonalSample offdiag_window(const EigenbasisObservable& obs,
                                 std::size_t pair_count) {
  const auto dim = static_cast<std::size_t>(obs.dim());
  if (pair_count < 2) {
    throw std::invalid_argument("offdiag_window: pair_count must be >= 2");
  }
  if (pair_count > dim / 4) {
    throw std::invalid_argument(
        "offdiag_window: pair_count must not exceed dim/4");
  }
  OffDiagonalSample sample;
  sample.first_state = (dim - pair_count) / 2;
  sample.state_count = pair_count;
  sample.values.reserve(pair_count * (pair_count - 1) / 2);
  sample.omega.reserve(sample.values.capacity());
  sample.ebar.reserve(sample.values.capacity());
  const std::size_t s0 = sample.first_state;
  for (std::size_t a = s0; a < s0 + pair_count; ++a) {
    for (std::size_t b = a + 1; b < s0 + pair_count; ++b) {
      sample.values.push_back(obs.mat(static_cast<Eigen::Index>(a),
                                      static_cast<Eigen::Index>(b)));
      const double ea = obs.evals(static_cast<Eigen::Index>(a));
      const double eb = obs.evals(static_cast<Eigen::Index>(b));
      sample.omega.push_back(eb - ea);
      sample.ebar.push_back(0.5 * (ea + eb));
    }
  }
  return sample;
}

namespace {

// Accumulate per-omega-bin moments of |Z_ab| over all upper-triangle pairs
// whose mean energy lies inside the window. For each row a the admissible b
// form a contiguous range located by binary search on the sorted spectrum.
struct BinAccumulator {
  std::vector<double> sum_abs;
  std::vector<double> sum_sq;
  std::vector<std::size_t> counts;
};

BinAccumulator scan_pairs(const EigenbasisObservable& obs,
                          std::pair<double, double> ebar_window,
                          double delta_omega) {
  if (!(delta_omega > 0.0)) {
    throw std::invalid_argument("scan_pairs: delta_omega must be positive");
  }
  if (!(ebar_window.first < ebar_window.second)) {
    throw std::invalid_argument("scan_pairs: empty mean-energy window");
  }
  const auto dim = static_cast<std::size_t>(obs.dim());
  const double* evals = obs.evals.data();
  const double omega_max = evals[dim - 1] - evals[0];
  const auto bins = static_cast<std::size_t>(omega_max / delta_omega) + 1;

  BinAccumulator acc;
  acc.sum_abs.assign(bins, 0.0);
  acc.sum_sq.assign(bins, 0.0);
  acc.counts.assign(bins, 0);

  std::size_t used = 0;
  for (std::size_t a = 0; a < dim; ++a) {
    const double ea = evals[a];
    // Ebar = (ea + eb)/2 in window  <=>  eb in [2 lo - ea, 2 hi - ea]
    const double* lo_ptr = std::lower_bound(
        evals + a + 1, evals + dim, 2.0 * ebar_window.first - ea);
    const double* hi_ptr = std::upper_bound(
        evals + a + 1, evals + dim, 2.0 * ebar_window.second - ea);
    for (const double* pb = lo_ptr; pb != hi_ptr; ++pb) {
      const auto b = static_cast<std::size_t>(pb - evals);
      const double omega = evals[b] - ea;
      auto bin = static_cast<std::size_t>(omega / delta_omega);
      if (bin >= bins) bin = bins - 1;
      // mat(b, a) == mat(a, b) exactly; reading down column a keeps the
      // inner loop contiguous in the column-major layout.
      const double z = obs.mat(static_cast<Eigen::Index>(b),
                               static_cast<Eigen::Index>(a));
      acc.sum_abs[bin] += std::abs(z);
      acc.sum_sq[bin] += z * z;
      ++acc.counts[bin];
      ++used;
    }
  }
  if (used == 0) {
    throw insufficient_data_error(
        "scan_pairs: no eigenstate pairs inside the mean-energy window");
  }
  return acc;
}

}  // namespace

VarianceProfile variance_profile(const EigenbasisObservable& obs, int sites,
                                 std::pair<double, double> ebar_window,
                                 double delta_omega,
                                 std::optional<std::pair<double, double>> fit_window,
                                 std::size_t min_bin_count) {
  if (sites < 1) throw std::invalid_argument("variance_profile: sites must be positive");
  const BinAccumulator acc = scan_pairs(obs, ebar_window, delta_omega);
  const double scale =
      static_cast<double>(sites) * static_cast<double>(obs.dim());

  VarianceProfile profile;
  for (std::size_t b = 0; b < acc.counts.size(); ++b) {
    if (acc.counts[b] < min_bin_count) continue;
    profile.omega.push_back((static_cast<double>(b) + 0.5) * delta_omega);
    profile.scaled_variance.push_back(
        scale * acc.sum_sq[b] / static_cast<double>(acc.counts[b]));
    profile.counts.push_back(acc.counts[b]);
  }
  if (profile.omega.empty()) {
    throw insufficient_data_error("variance_profile: every omega bin is under-filled");
  }

  double lo, hi;
  if (fit_window) {
    lo = fit_window->first;
    hi = fit_window->second;
  } else {
    // The exponential tail develops at large omega; fall back to a fraction
    // of the populated range when the spectrum is too narrow for omega > 16.
    const double omega_top = profile.omega.back();
    lo = std::min(16.0, 0.6 * omega_top);
    hi = 0.9 * omega_top;
  }
  profile.decay = fit_exponential_decay(profile.omega, profile.scaled_variance, lo, hi);
  return profile;
}

std::vector<std::pair<double, double>> gaussianity_ratio(
    const EigenbasisObservable& obs, std::pair<double, double> ebar_window,
    double delta_omega, std::size_t min_bin_count) {
  const BinAccumulator acc = scan_pairs(obs, ebar_window, delta_omega);
  std::vector<std::pair<double, double>> out;
  for (std::size_t b = 0; b < acc.counts.size(); ++b) {
    if (acc.counts[b] < min_bin_count) continue;
    const double n = static_cast<double>(acc.counts[b]);
    const double mean_abs = acc.sum_abs[b] / n;
    if (!(mean_abs > 0.0)) continue;
    out.emplace_back((static_cast<double>(b) + 0.5) * delta_omega,
                     (acc.sum_sq[b] / n) / (mean_abs * mean_abs));
  }
  return out;
}

}  // namespace edspec
