#include "edspec/basis.hpp"

#include <algorithm>
#include <stdexcept>

#include "edspec/errors.hpp"

namespace edspec {

namespace {

constexpr int kMaxSpinSites = 20;
constexpr std::size_t kMaxBosonDim = 20000;

}  // namespace

std::string SpinBasis::bitstring(std::size_t index) const {
  std::string s(static_cast<std::size_t>(sites), '0');
  for (int i = 0; i < sites; ++i) {
    if ((index >> i) & 1u) s[static_cast<std::size_t>(sites - 1 - i)] = '1';
  }
  return s;
}

SpinBasis spin_basis(int sites) {
  if (sites < 1 || sites > kMaxSpinSites) {
    throw config_error("spin_basis: L must lie in [1, " +
                       std::to_string(kMaxSpinSites) + "], got " +
                       std::to_string(sites));
  }
  return SpinBasis{sites, std::size_t{1} << sites};
}

std::size_t boson_dimension(int sites, int bosons) {
  // binomial(bosons + sites - 1, sites - 1), multiplicative form
  std::size_t n = static_cast<std::size_t>(bosons) + sites - 1;
  std::size_t k = static_cast<std::size_t>(sites) - 1;
  if (k > n - k) k = n - k;
  std::size_t result = 1;
  for (std::size_t j = 1; j <= k; ++j) {
    result = result * (n - k + j) / j;
  }
  return result;
}

BosonBasis boson_basis(int sites, int bosons) {
  if (sites < 1) throw config_error("boson_basis: L must be positive");
  if (bosons < 0) throw config_error("boson_basis: N must be non-negative");
  const std::size_t dim = boson_dimension(sites, bosons);
  if (dim > kMaxBosonDim) {
    throw config_error("boson_basis: dimension " + std::to_string(dim) +
                       " exceeds the dense-diagonalization guard of " +
                       std::to_string(kMaxBosonDim));
  }

  BosonBasis basis;
  basis.sites = sites;
  basis.bosons = bosons;
  basis.dim = dim;
  basis.states.reserve(dim);

  std::vector<int> current(static_cast<std::size_t>(sites), 0);
  // Descending lexicographic order: fill site k with the largest occupation
  // first, the final site takes the remainder.
  auto emit = [&](auto&& self, int site, int remaining) -> void {
    if (site == sites - 1) {
      current[static_cast<std::size_t>(site)] = remaining;
      basis.states.push_back(current);
      return;
    }
    for (int n = remaining; n >= 0; --n) {
      current[static_cast<std::size_t>(site)] = n;
      self(self, site + 1, remaining - n);
    }
  };
  emit(emit, 0, bosons);
  return basis;
}

std::size_t BosonBasis::index_of(std::span<const int> occupation) const {
  auto it = std::lower_bound(
      states.begin(), states.end(), occupation,
      [](const std::vector<int>& a, std::span<const int> b) {
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(),
                                            a.end());
      });
  if (it == states.end() ||
      !std::equal(it->begin(), it->end(), occupation.begin(),
                  occupation.end())) {
    throw std::invalid_argument("BosonBasis::index_of: state not in basis");
  }
  return static_cast<std::size_t>(it - states.begin());
}

Bipartition bipartition(const SpinBasis& basis, int left_sites) {
  if (left_sites < 0 || left_sites > basis.sites) {
    throw std::invalid_argument("bipartition: L_A must lie in [0, L]");
  }
  Bipartition p;
  p.left_sites = left_sites;
  p.right_sites = basis.sites - left_sites;
  p.rows = std::size_t{1} << left_sites;
  p.cols = std::size_t{1} << p.right_sites;
  return p;
}

}  // namespace edspec
