#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edspec/entanglement.hpp"
#include "edspec/linalg.hpp"
#include "edspec/spectral.hpp"

namespace edspec {

/// Contiguous principal M x M blocks of an observable in the energy
/// eigenbasis, block k starting at eigenstate index alpha0[k]. Blocks are
/// verbatim copies of the source entries.
struct BlockEnsemble {
  std::vector<Eigen::MatrixXd> blocks;
  std::size_t block_size = 0;
  std::vector<std::size_t> alpha0;
  std::size_t trim = 0;
  std::string source_label;
};

/// `count` blocks placed on a uniform stride across [trim, dim - trim);
/// overlap is allowed, but count may not exceed the number of distinct
/// start positions.
BlockEnsemble extract_blocks(const EigenbasisObservable& obs, std::size_t block_size,
                             std::size_t count, std::size_t trim);

/// Var(diagonal) / Var(upper triangle) of one block; GOE gives 2.
/// Empty when the off-diagonal variance vanishes (degenerate block).
std::optional<double> variance_ratio(const Eigen::MatrixXd& block);

/// Spacing ratios pooled across block spectra, edge_drop eigenvalues
/// removed at each spectral end of every block.
struct PooledRatios {
  std::vector<double> ratios;
  std::size_t degenerate_count = 0;  // ratios forced to 0 by zero spacings
};

PooledRatios ensemble_spacing_ratios(const BlockEnsemble& ensemble,
                                     std::size_t edge_drop);

/// NNSD with per-block unfolding and pooled spacings. Blocks whose
/// unfolding fails are skipped (counted in skipped_blocks). The histogram
/// spans [0, range_hi] when given, else [0, max pooled spacing].
HistogramData ensemble_nnsd(const BlockEnsemble& ensemble, int poly_degree,
                            double trim_frac, int bins,
                            std::optional<double> range_hi = std::nullopt,
                            std::size_t* skipped_blocks = nullptr);

/// SFF over the block spectra as the window ensemble, unfolded per block.
SffCurve ensemble_sff(const BlockEnsemble& ensemble,
                      std::span<const double> t_grid, int poly_degree,
                      double trim_frac, std::size_t* skipped_blocks = nullptr);

/// |Z_ij| grid of one block, for density plots.
Eigen::MatrixXd block_magnitude(const BlockEnsemble& ensemble,
                                std::size_t block_index);

/// Treat the central block (size 2^k) as a Hamiltonian of k fictitious
/// spins-1/2: diagonalize it and average the bipartite entanglement entropy
/// of states_averaged mid-spectrum eigenstates for every subsystem size.
EntropyCurve block_as_hamiltonian(const BlockEnsemble& ensemble,
                                  std::size_t states_averaged = 20);

}  // namespace edspec
