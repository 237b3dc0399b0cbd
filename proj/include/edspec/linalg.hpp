#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edspec/operators.hpp"

namespace edspec {

/// Full eigendecomposition of a real symmetric matrix.
/// Eigenvalues ascend; column k of evecs belongs to evals[k]. The sign of
/// each eigenvector is fixed so its largest-magnitude component is positive.
struct Spectrum {
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;

  Eigen::Index dim() const { return evals.size(); }
};

Spectrum eigh(const SymmetricOperator& op);

/// Ascending eigenvalues only (no vectors); same backend as eigh.
Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& mat,
                            const std::string& label = "");

/// Number of dense eigensolves performed by this process so far.
/// Lets callers verify that cached spectra are actually reused.
std::uint64_t eigensolve_count();

/// Observable rotated into the energy eigenbasis: mat(a, b) = <a|Z|b>,
/// exactly symmetrized after the rotation, co-indexed with evals.
struct EigenbasisObservable {
  Eigen::MatrixXd mat;
  Eigen::VectorXd evals;
  std::string label;

  Eigen::Index dim() const { return mat.rows(); }
};

EigenbasisObservable to_eigenbasis(const SymmetricOperator& observable,
                                   const Spectrum& spectrum);

/// Zero-mean Gaussian mixture fitted by expectation-maximization.
/// For k = 2 the components are ordered sigma[0] <= sigma[1].
struct MixtureFit {
  int components = 1;
  std::vector<double> weights;
  std::vector<double> sigmas;
  double log_likelihood = 0.0;
  double aic = 0.0;  // 2p - 2 logL with p = 1 (k=1) or 3 (k=2)
};

MixtureFit fit_gaussian_mixture(std::span<const double> samples, int components);

/// Least-squares fit of ln(variance) = ln(prefactor) - eta * omega
/// restricted to omega in [window_lo, window_hi].
struct DecayFit {
  double eta = 0.0;
  double prefactor = 0.0;
  double eta_stderr = 0.0;
  double residual = 0.0;  // RMS residual of the line fit in log space
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points_used = 0;
};

DecayFit fit_exponential_decay(std::span<const double> omegas,
                               std::span<const double> variances,
                               double window_lo, double window_hi);

}  // namespace edspec
