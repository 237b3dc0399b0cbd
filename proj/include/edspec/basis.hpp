#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace edspec {

/// Full Hilbert space of a chain of spin-1/2 sites.
///
/// State index and bit pattern coincide: site i (1-based) occupies bit i-1,
/// so the least significant bit is site 1, and a set bit means spin up.
struct SpinBasis {
  int sites = 0;
  std::size_t dim = 0;

  std::uint64_t state_bits(std::size_t index) const { return index; }
  std::size_t index_of(std::uint64_t bits) const { return bits; }
  bool up(std::size_t index, int site) const {
    return (index >> (site - 1)) & 1u;
  }
  /// Binary string with site L leftmost, e.g. index 2 at L=2 -> "10".
  std::string bitstring(std::size_t index) const;
};

/// L ranges over [1, 20]; beyond that a dense eigensolve is hopeless.
SpinBasis spin_basis(int sites);

/// Fixed-particle-number occupation basis for a bosonic chain.
///
/// States are ordered lexicographically descending on the occupation
/// vector (n_1, ..., n_L), so the first state is (N, 0, ..., 0).
struct BosonBasis {
  int sites = 0;
  int bosons = 0;
  std::size_t dim = 0;
  std::vector<std::vector<int>> states;

  std::size_t index_of(std::span<const int> occupation) const;
};

BosonBasis boson_basis(int sites, int bosons);

/// Number of occupation vectors of length `sites` summing to `bosons`,
/// i.e. binomial(bosons + sites - 1, sites - 1).
std::size_t boson_dimension(int sites, int bosons);

/// Index factorization of a spin chain into two contiguous subsystems.
///
/// The row is the value of the top left_sites bits (the first characters of
/// the index written as an L-bit binary string), the column the value of the
/// remaining right_sites bits, so row * 2^right_sites + col == index.
struct Bipartition {
  int left_sites = 0;
  int right_sites = 0;
  std::size_t rows = 1;
  std::size_t cols = 1;

  std::size_t row_of(std::size_t index) const { return index >> right_sites; }
  std::size_t col_of(std::size_t index) const { return index & (cols - 1); }
};

Bipartition bipartition(const SpinBasis& basis, int left_sites);

}  // namespace edspec
