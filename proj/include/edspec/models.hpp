#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "edspec/basis.hpp"
#include "edspec/operators.hpp"

namespace edspec {

/// XXZ chain with a local field, open boundary conditions.
///
/// H = sum_{i=1}^{L-1} J (Sx_i Sx_{i+1} + Sy_i Sy_{i+1} + Delta Sz_i Sz_{i+1})
///     + h (Sz_p + Sx_p),  p = L/2 - 1 (1-based).
/// Spin operators are sigma/2; Sy_i Sy_j products are real, so everything
/// is stored as a real symmetric matrix.
struct XxzParams {
  int sites = 14;
  double coupling = 1.0;                         // J
  double anisotropy = std::numbers::pi / 4.0;    // Delta
  double field = 0.0;                            // h

  int perturbed_site() const { return sites / 2 - 1; }
};

SymmetricOperator build_xxz(const XxzParams& params, const SpinBasis& basis);

/// Chain-averaged nearest-neighbor in-plane exchange,
/// (1/L) sum_{i=1}^{L-1} (Sx_i Sx_{i+1} + Sy_i Sy_{i+1}).
SymmetricOperator build_nn_exchange(const SpinBasis& basis);

/// Next-nearest-neighbor counterpart, (1/L) sum_{i=1}^{L-2} (Sx_i Sx_{i+2} + Sy_i Sy_{i+2}).
SymmetricOperator build_nnn_exchange(const SpinBasis& basis);

/// Disordered Bose-Hubbard chain, open boundary conditions.
///
/// H = -J sum_<i,j> (b+_i b_j + h.c.) + (U/2) sum_i n_i (n_i - 1)
///     + sum_i eps_i n_i,  eps_i uniform in (-disorder_bound, disorder_bound).
struct BoseHubbardParams {
  int sites = 8;
  int bosons = 8;
  double hopping = 1.0;          // J
  double interaction = 1.0;      // U
  double disorder_bound = 0.05;  // w
  std::uint64_t seed = 1;
};

/// The on-site energies eps_i drawn for the given seed; one fixed
/// realization per seed.
std::vector<double> disorder_profile(const BoseHubbardParams& params);

SymmetricOperator build_bose_hubbard(const BoseHubbardParams& params,
                                     const BosonBasis& basis);

enum class BosonObservable {
  total_occupation,      // sum_i n_i; equals N * identity in the fixed-N sector
  half_chain_occupation, // sum_{i <= L/2} n_i
  site_occupation,       // n_site
};

/// Diagonal occupation observable in the fixed-N basis. `site` is 1-based
/// and only consulted for site_occupation.
SymmetricOperator build_occupation(const BosonBasis& basis,
                                   BosonObservable variant, int site = 1);

}  // namespace edspec
