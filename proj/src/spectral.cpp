#include "edspec/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "edspec/errors.hpp"

namespace edspec {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

bool is_sorted_ascending(std::span<const double> v) {
  return std::is_sorted(v.begin(), v.end());
}

}  // namespace

std::vector<double> UnfoldedSpectrum::spacings() const {
  std::vector<double> s;
  if (values.size() < 2) return s;
  s.reserve(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    s.push_back(values[i + 1] - values[i]);
  }
  return s;
}

UnfoldedSpectrum unfold(std::span<const double> evals, int poly_degree,
                        double trim_frac) {
  const std::size_t n = evals.size();
  if (n < 50) {
    throw insufficient_data_error("unfold: needs at least 50 levels, got " +
                                  std::to_string(n));
  }
  if (poly_degree < 3 || poly_degree > 20) {
    throw std::invalid_argument("unfold: poly_degree must lie in [3, 20]");
  }
  if (trim_frac < 0.0 || trim_frac >= 0.3) {
    throw std::invalid_argument("unfold: trim_frac must lie in [0, 0.3)");
  }
  if (!is_sorted_ascending(evals)) {
    throw std::invalid_argument("unfold: eigenvalues must ascend");
  }
  const double lo = evals.front(), hi = evals.back();
  if (!(hi > lo)) {
    throw computation_error("unfold: fully degenerate spectrum");
  }

  // Least-squares fit of the staircase N(E_i) = i + 1/2 in a Chebyshev
  // basis on [-1, 1] to keep the high-degree fit well conditioned.
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const int cols = poly_degree + 1;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), cols);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (evals[i] - mid) / half;
    double t_prev = 1.0, t_cur = x;
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    if (cols > 1) design(static_cast<Eigen::Index>(i), 1) = x;
    for (int k = 2; k < cols; ++k) {
      const double t_next = 2.0 * x * t_cur - t_prev;
      design(static_cast<Eigen::Index>(i), k) = t_next;
      t_prev = t_cur;
      t_cur = t_next;
    }
  }
  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    target(static_cast<Eigen::Index>(i)) = static_cast<double>(i) + 0.5;
  }
  const Eigen::VectorXd coeff = design.householderQr().solve(target);
  Eigen::VectorXd fitted = design * coeff;

  const auto trim = static_cast<std::size_t>(trim_frac * static_cast<double>(n));
  const std::size_t keep = n - 2 * trim;
  if (keep < 2) throw insufficient_data_error("unfold: trim leaves < 2 levels");

  UnfoldedSpectrum out;
  out.trim_frac = trim_frac;
  out.poly_degree = poly_degree;
  out.values.resize(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.values[i] = fitted(static_cast<Eigen::Index>(i + trim));
  }
  for (std::size_t i = 0; i + 1 < keep; ++i) {
    if (out.values[i + 1] < out.values[i] - 1e-9) {
      throw computation_error(
          "unfold: fitted staircase is non-monotone in the retained window; "
          "reduce poly_degree");
    }
    if (out.values[i + 1] < out.values[i]) out.values[i + 1] = out.values[i];
  }
  const double mean_spacing =
      (out.values.back() - out.values.front()) / static_cast<double>(keep - 1);
  if (mean_spacing < 0.9 || mean_spacing > 1.1) {
    throw computation_error("unfold: mean unfolded spacing " +
                            std::to_string(mean_spacing) + " is far from 1");
  }
  return out;
}

HistogramData histogram(std::span<const double> samples, int bins, double lo,
                        double hi) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be positive");
  if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");
  if (samples.empty()) throw std::invalid_argument("histogram: no samples");
  HistogramData h;
  h.sample_count = samples.size();
  h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) {
    h.bin_edges[static_cast<std::size_t>(b)] = lo + width * b;
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  std::size_t in_range = 0;
  for (double x : samples) {
    if (x < lo || x > hi) continue;
    auto b = static_cast<std::size_t>((x - lo) / width);
    if (b >= counts.size()) b = counts.size() - 1;  // x == hi
    ++counts[b];
    ++in_range;
  }
  if (in_range == 0) throw std::invalid_argument("histogram: no samples in range");
  h.densities.resize(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    h.densities[b] = static_cast<double>(counts[b]) /
                     (static_cast<double>(in_range) * width);
  }
  return h;
}

HistogramData nnsd(const UnfoldedSpectrum& unfolded, int bins) {
  if (unfolded.values.size() < 100) {
    throw insufficient_data_error("nnsd: needs at least 100 retained levels");
  }
  const std::vector<double> s = unfolded.spacings();
  const double s_max = *std::max_element(s.begin(), s.end());
  return histogram(s, bins, 0.0, std::max(s_max, 1e-12));
}

namespace {

double brody_b(double gamma) {
  return std::pow(std::exp(std::lgamma((gamma + 2.0) / (gamma + 1.0))),
                  gamma + 1.0);
}

double brody_log_likelihood(std::span<const double> s, double gamma) {
  const double b = brody_b(gamma);
  const double log_b = std::log(b);
  double ll = 0.0;
  for (double v : s) {
    const double sv = std::max(v, 1e-12);  // degenerate pairs contribute s = 0
    ll += std::log(gamma + 1.0) + log_b + gamma * std::log(sv) -
          b * std::pow(sv, gamma + 1.0);
  }
  return ll;
}

}  // namespace

double brody_pdf(double s, double gamma) {
  if (s < 0.0) throw std::invalid_argument("brody_pdf: s must be non-negative");
  const double b = brody_b(gamma);
  return (gamma + 1.0) * b * std::pow(s, gamma) *
         std::exp(-b * std::pow(s, gamma + 1.0));
}

BrodyFit brody_fit(std::span<const double> spacings) {
  if (spacings.size() < 500) {
    throw insufficient_data_error("brody_fit: needs at least 500 spacings");
  }
  double m = 0.0;
  for (double s : spacings) {
    if (s < 0.0) throw std::invalid_argument("brody_fit: negative spacing");
    m += s;
  }
  m /= static_cast<double>(spacings.size());
  if (m < 0.8 || m > 1.2) {
    throw std::invalid_argument(
        "brody_fit: mean spacing must be ~1 (unfold first), got " +
        std::to_string(m));
  }

  // Golden-section maximization of the likelihood over gamma in [0, 1].
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = brody_log_likelihood(spacings, c);
  double fd = brody_log_likelihood(spacings, d);
  for (int iter = 0; iter < 80 && (b - a) > 1e-8; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = brody_log_likelihood(spacings, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = brody_log_likelihood(spacings, d);
    }
  }
  BrodyFit fit;
  fit.gamma = 0.5 * (a + b);
  fit.log_likelihood = brody_log_likelihood(spacings, fit.gamma);

  const double l0 = brody_log_likelihood(spacings, 0.0);
  const double l1 = brody_log_likelihood(spacings, 1.0);
  const double spread = std::max({fit.log_likelihood, l0, l1}) -
                        std::min({fit.log_likelihood, l0, l1});
  fit.quality_warning = spread < 1e-9 * (1.0 + std::abs(fit.log_likelihood));
  // Interior optimum never sits below the boundary values; clamp to the
  // better boundary if the grid search ended on a flat shoulder.
  if (l0 > fit.log_likelihood) {
    fit.gamma = 0.0;
    fit.log_likelihood = l0;
  }
  if (l1 > fit.log_likelihood) {
    fit.gamma = 1.0;
    fit.log_likelihood = l1;
  }
  return fit;
}

std::vector<std::pair<double, double>> number_variance(
    const UnfoldedSpectrum& unfolded, std::span<const double> l_grid) {
  if (l_grid.empty()) throw std::invalid_argument("number_variance: empty grid");
  const std::vector<double>& u = unfolded.values;
  if (u.size() < 2) throw insufficient_data_error("number_variance: spectrum too small");
  const double span = u.back() - u.front();
  const double l_max = *std::max_element(l_grid.begin(), l_grid.end());
  if (l_max > span / 10.0) {
    throw std::invalid_argument(
        "number_variance: max window length exceeds span/10");
  }

  std::vector<std::pair<double, double>> out;
  out.reserve(l_grid.size());
  for (double l : l_grid) {
    if (!(l > 0.0)) throw std::invalid_argument("number_variance: l must be positive");
    const double stride = l / 4.0;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t windows = 0;
    for (double start = u.front(); start + l <= u.back(); start += stride) {
      const auto first = std::lower_bound(u.begin(), u.end(), start);
      const auto last = std::lower_bound(u.begin(), u.end(), start + l);
      const double count = static_cast<double>(last - first);
      sum += count;
      sum_sq += count * count;
      ++windows;
    }
    const double w = static_cast<double>(windows);
    const double variance = sum_sq / w - (sum / w) * (sum / w);
    out.emplace_back(l, variance);
  }
  return out;
}

std::vector<double> spacing_ratios(std::span<const double> evals) {
  if (evals.size() < 3) {
    throw std::invalid_argument("spacing_ratios: needs at least 3 levels");
  }
  if (!is_sorted_ascending(evals)) {
    throw std::invalid_argument("spacing_ratios: eigenvalues must ascend");
  }
  std::vector<double> r;
  r.reserve(evals.size() - 2);
  for (std::size_t i = 0; i + 2 < evals.size(); ++i) {
    const double s0 = evals[i + 1] - evals[i];
    const double s1 = evals[i + 2] - evals[i + 1];
    const double hi = std::max(s0, s1);
    r.push_back(hi > 0.0 ? std::min(s0, s1) / hi : 0.0);
  }
  return r;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

std::vector<double> reference_curve(ReferenceCurve kind,
                                    std::span<const double> grid) {
  std::vector<double> y;
  y.reserve(grid.size());
  constexpr double pi = std::numbers::pi;
  for (double x : grid) {
    switch (kind) {
      case ReferenceCurve::nnsd_poisson:
        if (x < 0.0) throw std::invalid_argument("reference_curve: negative spacing");
        y.push_back(std::exp(-x));
        break;
      case ReferenceCurve::nnsd_wigner:
        if (x < 0.0) throw std::invalid_argument("reference_curve: negative spacing");
        y.push_back(0.5 * pi * x * std::exp(-0.25 * pi * x * x));
        break;
      case ReferenceCurve::pr_poisson:
        if (x < 0.0) throw std::invalid_argument("reference_curve: negative ratio");
        y.push_back(2.0 / ((1.0 + x) * (1.0 + x)));
        break;
      case ReferenceCurve::pr_goe: {
        if (x < 0.0) throw std::invalid_argument("reference_curve: negative ratio");
        const double q = 1.0 + x + x * x;
        y.push_back(6.75 * (x + x * x) / (q * q * std::sqrt(q)));
        break;
      }
      case ReferenceCurve::nv_poisson:
        y.push_back(x);
        break;
      case ReferenceCurve::nv_goe:
        y.push_back(2.0 / (pi * pi) *
                    (std::log(2.0 * pi * x) + kEulerGamma + 1.0 - pi * pi / 8.0));
        break;
    }
  }
  return y;
}

SffCurve sff(const std::vector<std::vector<double>>& eval_windows,
             std::span<const double> t_grid) {
  if (eval_windows.empty()) throw std::invalid_argument("sff: no windows");
  const std::size_t n = eval_windows.front().size();
  if (n == 0) throw std::invalid_argument("sff: empty window");
  for (const auto& w : eval_windows) {
    if (w.size() != n) {
      throw std::invalid_argument("sff: windows must all have the same size");
    }
  }
  if (!std::is_sorted(t_grid.begin(), t_grid.end()) ||
      (!t_grid.empty() && t_grid.front() <= 0.0)) {
    throw std::invalid_argument("sff: t_grid must be positive and sorted");
  }

  SffCurve curve;
  curve.times.assign(t_grid.begin(), t_grid.end());
  curve.values.assign(t_grid.size(), 0.0);
  curve.window_size = n;
  curve.window_count = eval_windows.size();
  for (const auto& window : eval_windows) {
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      const double t = t_grid[k];
      double re = 0.0, im = 0.0;
      for (double e : window) {
        re += std::cos(e * t);
        im += std::sin(e * t);
      }
      curve.values[k] += (re * re + im * im) / static_cast<double>(n);
    }
  }
  for (double& v : curve.values) v /= static_cast<double>(eval_windows.size());
  return curve;
}

std::pair<SffCurve, SffCurve> sff_single_realization(
    std::span<const double> unfolded_evals, std::span<const double> t_grid,
    int smooth_window) {
  if (smooth_window < 1 || smooth_window % 2 == 0) {
    throw std::invalid_argument("sff_single_realization: smooth_window must be odd");
  }
  std::vector<std::vector<double>> one(1);
  one[0].assign(unfolded_evals.begin(), unfolded_evals.end());
  SffCurve raw = sff(one, t_grid);

  SffCurve smooth = raw;
  const int half = (smooth_window - 1) / 2;
  const auto n = static_cast<std::ptrdiff_t>(raw.values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) s += raw.values[static_cast<std::size_t>(j)];
    smooth.values[static_cast<std::size_t>(i)] = s / static_cast<double>(hi - lo + 1);
  }
  return {std::move(raw), std::move(smooth)};
}

std::vector<std::vector<double>> partition_spectrum(
    std::span<const double> evals, std::size_t window_size) {
  if (window_size <= 1) {
    throw std::invalid_argument("partition_spectrum: window_size must exceed 1");
  }
  if (window_size > evals.size()) {
    throw std::invalid_argument("partition_spectrum: window_size exceeds spectrum");
  }
  const std::size_t count = evals.size() / window_size;
  const std::size_t remainder = evals.size() - count * window_size;
  const std::size_t left = remainder / 2;
  std::vector<std::vector<double>> windows(count);
  for (std::size_t w = 0; w < count; ++w) {
    const auto begin = evals.begin() + static_cast<std::ptrdiff_t>(left + w * window_size);
    windows[w].assign(begin, begin + static_cast<std::ptrdiff_t>(window_size));
  }
  return windows;
}

std::vector<double> log_time_grid(double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) {
    throw std::invalid_argument("log_time_grid: need 0 < t_min < t_max, points >= 2");
  }
  std::vector<double> t(static_cast<std::size_t>(points));
  const double step = std::log(t_max / t_min) / (points - 1);
  for (int i = 0; i < points; ++i) {
    t[static_cast<std::size_t>(i)] = t_min * std::exp(step * i);
  }
  return t;
}

}  // namespace edspec
