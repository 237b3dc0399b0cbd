#include "edspec/submatrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "edspec/errors.hpp"

namespace edspec {

BlockEnsemble extract_blocks(const EigenbasisObservable& obs,
                             std::size_t block_size, std::size_t count,
                             std::size_t trim) {
  const auto dim = static_cast<std::size_t>(obs.dim());
  if (block_size < 1 || count < 1) {
    throw std::invalid_argument("extract_blocks: block_size and count must be positive");
  }
  if (2 * trim + block_size > dim) {
    throw std::invalid_argument(
        "extract_blocks: no block of size " + std::to_string(block_size) +
        " fits inside the trimmed range of dim " + std::to_string(dim));
  }
  const std::size_t positions = dim - 2 * trim - block_size + 1;
  if (count > positions) {
    throw std::invalid_argument(
        "extract_blocks: infeasible count " + std::to_string(count) +
        "; at most " + std::to_string(positions) +
        " blocks fit for this (M, trim, dim)");
  }

  BlockEnsemble ens;
  ens.block_size = block_size;
  ens.trim = trim;
  ens.source_label = obs.label;
  ens.blocks.reserve(count);
  ens.alpha0.reserve(count);
  const std::size_t stride = count > 1 ? (positions - 1) / (count - 1) : 0;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start =
        count > 1 ? trim + k * stride : trim + (positions - 1) / 2;
    ens.alpha0.push_back(start);
    ens.blocks.push_back(obs.mat.block(static_cast<Eigen::Index>(start),
                                       static_cast<Eigen::Index>(start),
                                       static_cast<Eigen::Index>(block_size),
                                       static_cast<Eigen::Index>(block_size)));
  }
  return ens;
}

std::optional<double> variance_ratio(const Eigen::MatrixXd& block) {
  const auto m = block.rows();
  if (m < 3 || block.cols() != m) {
    throw std::invalid_argument("variance_ratio: block must be square with M >= 3");
  }
  double diag_sum = 0.0, diag_sq = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    diag_sum += block(i, i);
    diag_sq += block(i, i) * block(i, i);
  }
  const double nd = static_cast<double>(m);
  const double diag_var = (diag_sq - diag_sum * diag_sum / nd) / (nd - 1.0);

  double off_sum = 0.0, off_sq = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      off_sum += block(i, j);
      off_sq += block(i, j) * block(i, j);
    }
  }
  const double no = static_cast<double>(m * (m - 1) / 2);
  const double off_var = (off_sq - off_sum * off_sum / no) / (no - 1.0);
  if (off_var < 1e-30) return std::nullopt;
  return diag_var / off_var;
}

PooledRatios ensemble_spacing_ratios(const BlockEnsemble& ensemble,
                                     std::size_t edge_drop) {
  const std::size_t m = ensemble.block_size;
  if (m < 2 * edge_drop + 4) {
    throw std::invalid_argument(
        "ensemble_spacing_ratios: edge_drop leaves fewer than 4 eigenvalues");
  }
  PooledRatios pooled;
  for (const auto& block : ensemble.blocks) {
    const Eigen::VectorXd w = eigenvalues(block, ensemble.source_label);
    const std::span<const double> kept(w.data() + edge_drop,
                                       m - 2 * edge_drop);
    for (double r : spacing_ratios(kept)) {
      if (r == 0.0) ++pooled.degenerate_count;
      pooled.ratios.push_back(r);
    }
  }
  return pooled;
}

namespace {

// Unfold every block spectrum independently; blocks whose unfolding fails
// are skipped so one pathological block cannot abort the whole ensemble.
std::vector<std::vector<double>> unfolded_block_spectra(
    const BlockEnsemble& ensemble, int poly_degree, double trim_frac,
    std::size_t* skipped_blocks) {
  std::vector<std::vector<double>> spectra;
  std::size_t skipped = 0;
  for (const auto& block : ensemble.blocks) {
    const Eigen::VectorXd w = eigenvalues(block, ensemble.source_label);
    try {
      UnfoldedSpectrum u = unfold(
          std::span<const double>(w.data(), static_cast<std::size_t>(w.size())),
          poly_degree, trim_frac);
      spectra.push_back(std::move(u.values));
    } catch (const std::exception&) {
      ++skipped;
    }
  }
  if (skipped_blocks) *skipped_blocks = skipped;
  if (spectra.empty()) {
    throw computation_error("ensemble unfolding failed for every block");
  }
  return spectra;
}

}  // namespace

HistogramData ensemble_nnsd(const BlockEnsemble& ensemble, int poly_degree,
                            double trim_frac, int bins,
                            std::optional<double> range_hi,
                            std::size_t* skipped_blocks) {
  if (ensemble.block_size < 256) {
    throw std::invalid_argument(
        "ensemble_nnsd: per-block unfolding needs M >= 256");
  }
  const auto spectra =
      unfolded_block_spectra(ensemble, poly_degree, trim_frac, skipped_blocks);
  std::vector<double> spacings;
  for (const auto& u : spectra) {
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      spacings.push_back(u[i + 1] - u[i]);
    }
  }
  const double s_max = range_hi.value_or(
      *std::max_element(spacings.begin(), spacings.end()));
  return histogram(spacings, bins, 0.0, std::max(s_max, 1e-12));
}

SffCurve ensemble_sff(const BlockEnsemble& ensemble,
                      std::span<const double> t_grid, int poly_degree,
                      double trim_frac, std::size_t* skipped_blocks) {
  if (ensemble.block_size < 128) {
    throw std::invalid_argument("ensemble_sff: needs M >= 128");
  }
  const auto spectra =
      unfolded_block_spectra(ensemble, poly_degree, trim_frac, skipped_blocks);
  return sff(spectra, t_grid);
}

Eigen::MatrixXd block_magnitude(const BlockEnsemble& ensemble,
                                std::size_t block_index) {
  if (block_index >= ensemble.blocks.size()) {
    throw std::invalid_argument("block_magnitude: block index out of range");
  }
  return ensemble.blocks[block_index].cwiseAbs();
}

EntropyCurve block_as_hamiltonian(const BlockEnsemble& ensemble,
                                  std::size_t states_averaged) {
  const std::size_t m = ensemble.block_size;
  if (m < 2 || !std::has_single_bit(m)) {
    throw std::invalid_argument("block_as_hamiltonian: block size must be a power of two");
  }
  if (states_averaged < 1 || states_averaged > m) {
    throw std::invalid_argument("block_as_hamiltonian: bad states_averaged");
  }
  const int k = std::countr_zero(m);

  SymmetricOperator fictitious;
  fictitious.mat = ensemble.blocks[ensemble.blocks.size() / 2];
  fictitious.label = ensemble.source_label + " block";
  const Spectrum spec = eigh(fictitious);

  const std::size_t first = (m - states_averaged) / 2;
  std::vector<Eigen::VectorXd> states;
  states.reserve(states_averaged);
  for (std::size_t i = first; i < first + states_averaged; ++i) {
    states.push_back(spec.evecs.col(static_cast<Eigen::Index>(i)));
  }
  return mean_entropy_curve(states, k);
}

}  // namespace edspec
