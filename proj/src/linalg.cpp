#include "edspec/linalg.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "edspec/errors.hpp"

#if defined(EDSPEC_HAVE_LAPACKE)
#include <lapacke.h>
#endif

namespace edspec {

namespace {

std::atomic<std::uint64_t> g_eigensolve_count{0};

void solve_symmetric(Eigen::MatrixXd& a, Eigen::VectorXd& w, bool vectors,
                     const std::string& label) {
  g_eigensolve_count.fetch_add(1, std::memory_order_relaxed);
  const auto n = a.rows();
  w.resize(n);
#if defined(EDSPEC_HAVE_LAPACKE)
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'U',
                                  static_cast<lapack_int>(n), a.data(),
                                  static_cast<lapack_int>(n), w.data());
  if (info != 0) {
    throw computation_error("eigh: dsyevd failed with info=" +
                            std::to_string(info) + " on \"" + label + "\"");
  }
#else
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw computation_error("eigh: eigensolver did not converge on \"" + label +
                            "\"");
  }
  w = solver.eigenvalues();
  if (vectors) a = solver.eigenvectors();
#endif
}

// Largest-magnitude component positive, first index winning ties.
void fix_eigenvector_signs(Eigen::MatrixXd& evecs) {
  for (Eigen::Index k = 0; k < evecs.cols(); ++k) {
    Eigen::Index arg = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < evecs.rows(); ++i) {
      const double a = std::abs(evecs(i, k));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (evecs(arg, k) < 0.0) evecs.col(k) = -evecs.col(k);
  }
}

}  // namespace

std::uint64_t eigensolve_count() {
  return g_eigensolve_count.load(std::memory_order_relaxed);
}

Spectrum eigh(const SymmetricOperator& op) {
  if (op.dim() < 1) throw std::invalid_argument("eigh: empty matrix");
  if (!op.mat.allFinite()) {
    throw computation_error("eigh: non-finite entries in \"" + op.label + "\"");
  }
  Spectrum s;
  s.evecs = op.mat;
  solve_symmetric(s.evecs, s.evals, true, op.label);
  fix_eigenvector_signs(s.evecs);
  return s;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& mat, const std::string& label) {
  if (mat.rows() < 1) throw std::invalid_argument("eigenvalues: empty matrix");
  Eigen::MatrixXd a = mat;
  Eigen::VectorXd w;
  solve_symmetric(a, w, false, label);
  return w;
}

EigenbasisObservable to_eigenbasis(const SymmetricOperator& observable,
                                   const Spectrum& spectrum) {
  if (observable.dim() != spectrum.dim()) {
    throw std::invalid_argument("to_eigenbasis: dimension mismatch");
  }
  EigenbasisObservable out;
  Eigen::MatrixXd tmp(observable.dim(), observable.dim());
  tmp.noalias() = observable.mat * spectrum.evecs;
  out.mat.noalias() = spectrum.evecs.transpose() * tmp;
  out.mat = 0.5 * (out.mat + out.mat.transpose()).eval();
  out.evals = spectrum.evals;
  out.label = observable.label + " (eigenbasis)";
  return out;
}

namespace {

double gaussian_log_density(double x, double sigma) {
  static const double log_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return -0.5 * (x * x) / (sigma * sigma) - std::log(sigma) - log_sqrt_2pi;
}

}  // namespace

MixtureFit fit_gaussian_mixture(std::span<const double> samples, int components) {
  if (components != 1 && components != 2) {
    throw std::invalid_argument("fit_gaussian_mixture: k must be 1 or 2");
  }
  if (samples.size() < 100) {
    throw insufficient_data_error("fit_gaussian_mixture: needs at least 100 samples");
  }
  const auto n = static_cast<double>(samples.size());
  double sum_sq = 0.0;
  for (double x : samples) sum_sq += x * x;
  const double rms = std::sqrt(sum_sq / n);
  if (!(rms > 0.0) || !std::isfinite(rms)) {
    throw computation_error("fit_gaussian_mixture: degenerate samples (sigma -> 0)");
  }

  MixtureFit fit;
  fit.components = components;
  if (components == 1) {
    fit.weights = {1.0};
    fit.sigmas = {rms};
    double ll = 0.0;
    for (double x : samples) ll += gaussian_log_density(x, rms);
    fit.log_likelihood = ll;
    fit.aic = 2.0 * 1 - 2.0 * ll;
    return fit;
  }

  // Initialization brackets the expected narrow/broad split.
  double w1 = 0.5, w2 = 0.5;
  double s1 = 0.3 * rms, s2 = 1.5 * rms;
  const double sigma_floor = 1e-12 * rms;
  double prev_ll = -std::numeric_limits<double>::infinity();
  double ll = prev_ll;
  for (int iter = 0; iter < 500; ++iter) {
    double r1_sum = 0.0, r1_xx = 0.0, r2_xx = 0.0;
    ll = 0.0;
    for (double x : samples) {
      const double l1 = std::log(w1) + gaussian_log_density(x, s1);
      const double l2 = std::log(w2) + gaussian_log_density(x, s2);
      const double m = std::max(l1, l2);
      const double e1 = std::exp(l1 - m), e2 = std::exp(l2 - m);
      const double norm = e1 + e2;
      const double r1 = e1 / norm;
      ll += m + std::log(norm);
      r1_sum += r1;
      r1_xx += r1 * x * x;
      r2_xx += (1.0 - r1) * x * x;
    }
    if (ll + 1e-9 < prev_ll) {
      throw computation_error("fit_gaussian_mixture: EM log-likelihood decreased");
    }
    const bool converged = (iter > 0) && (ll - prev_ll < 1e-9);
    prev_ll = ll;
    const double r2_sum = n - r1_sum;
    w1 = r1_sum / n;
    w2 = r2_sum / n;
    s1 = std::max(std::sqrt(r1_xx / std::max(r1_sum, 1e-300)), sigma_floor);
    s2 = std::max(std::sqrt(r2_xx / std::max(r2_sum, 1e-300)), sigma_floor);
    if (converged) break;
  }
  if (s1 > s2) {
    std::swap(s1, s2);
    std::swap(w1, w2);
  }
  fit.weights = {w1, w2};
  fit.sigmas = {s1, s2};
  fit.log_likelihood = ll;
  fit.aic = 2.0 * 3 - 2.0 * ll;
  return fit;
}

DecayFit fit_exponential_decay(std::span<const double> omegas,
                               std::span<const double> variances,
                               double window_lo, double window_hi) {
  if (omegas.size() != variances.size()) {
    throw std::invalid_argument("fit_exponential_decay: size mismatch");
  }
  if (!(window_lo < window_hi)) {
    throw std::invalid_argument("fit_exponential_decay: empty window");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i] < window_lo || omegas[i] > window_hi) continue;
    if (!(variances[i] > 0.0)) {
      throw std::invalid_argument(
          "fit_exponential_decay: non-positive variance inside the fit window");
    }
    x.push_back(omegas[i]);
    y.push_back(std::log(variances[i]));
  }
  if (x.size() < 5) {
    throw insufficient_data_error(
        "fit_exponential_decay: fewer than 5 points in the fit window");
  }
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("fit_exponential_decay: degenerate omega values");
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss_res += r * r;
  }
  DecayFit fit;
  fit.eta = -slope;
  fit.prefactor = std::exp(intercept);
  fit.residual = x.size() > 2 ? std::sqrt(ss_res / (n - 2.0)) : 0.0;
  fit.eta_stderr = x.size() > 2 ? fit.residual / std::sqrt(sxx) : 0.0;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.points_used = x.size();
  return fit;
}

}  // namespace edspec
