#include "edspec/entanglement.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace edspec {

namespace {

int sites_from_dim(std::size_t dim) {
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("eigenstate_entropy: state length must be 2^L");
  }
  return std::countr_zero(dim);
}

}  // namespace

double eigenstate_entropy(std::span<const double> state, int subsystem_sites) {
  const int sites = sites_from_dim(state.size());
  if (subsystem_sites < 0 || subsystem_sites > sites) {
    throw std::invalid_argument("eigenstate_entropy: L_A must lie in [0, L]");
  }
  double norm_sq = 0.0;
  for (double c : state) norm_sq += c * c;
  if (std::abs(std::sqrt(norm_sq) - 1.0) > 1e-9) {
    throw std::invalid_argument("eigenstate_entropy: state is not normalized");
  }
  const int cut = std::min(subsystem_sites, sites - subsystem_sites);
  if (cut == 0) return 0.0;

  // Psi(row, col) = state[row * 2^(L-cut) + col] with row the top `cut`
  // bits. The column-major map of the buffer as (2^(L-cut) x 2^cut) is the
  // transpose of Psi, which shares its singular values.
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << (sites - cut));
  const auto cols = static_cast<Eigen::Index>(std::size_t{1} << cut);
  Eigen::Map<const Eigen::MatrixXd> psi(state.data(), rows, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi);

  double entropy = 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double lambda = svd.singularValues()(k) * svd.singularValues()(k);
    if (lambda > 1e-14) entropy -= lambda * std::log(lambda);
  }
  return entropy;
}

double page_curve(int subsystem_sites, int sites) {
  if (subsystem_sites < 0 || subsystem_sites > sites || sites < 1) {
    throw std::invalid_argument("page_curve: L_A must lie in [0, L]");
  }
  const int a = std::min(subsystem_sites, sites - subsystem_sites);
  return a * std::numbers::ln2 - 0.5 * std::exp2(2 * a - sites);
}

std::vector<double> EntropyCurve::normalized() const {
  std::vector<double> out(mean_entropy.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = mean_entropy[i] / normalization;
  }
  return out;
}

EntropyCurve mean_entropy_curve(const std::vector<Eigen::VectorXd>& states,
                                int sites) {
  if (states.empty()) {
    throw std::invalid_argument("mean_entropy_curve: no states given");
  }
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << sites);
  for (const auto& s : states) {
    if (s.size() != dim) {
      throw std::invalid_argument("mean_entropy_curve: state length != 2^L");
    }
  }
  EntropyCurve curve;
  curve.states_averaged = states.size();
  curve.normalization = 0.5 * sites * std::numbers::ln2;
  curve.subsystem_sizes.resize(static_cast<std::size_t>(sites) + 1);
  curve.mean_entropy.assign(static_cast<std::size_t>(sites) + 1, 0.0);
  for (int la = 0; la <= sites; ++la) {
    curve.subsystem_sizes[static_cast<std::size_t>(la)] = la;
    double sum = 0.0;
    for (const auto& s : states) {
      sum += eigenstate_entropy(std::span<const double>(s.data(),
                                                        static_cast<std::size_t>(s.size())),
                                la);
    }
    curve.mean_entropy[static_cast<std::size_t>(la)] =
        sum / static_cast<double>(states.size());
  }
  return curve;
}

}  // namespace edspec
