#include "edspec/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "edspec/errors.hpp"

namespace edspec {

namespace {

// In-plane exchange Sx_i Sx_j + Sy_i Sy_j = (S+_i S-_j + S-_i S+_j) / 2:
// it flips every antiparallel pair {i, j} with amplitude 1/2.
void add_flip_flop(Eigen::MatrixXd& mat, const SpinBasis& basis, int site_a,
                   int site_b, double amplitude) {
  const std::uint64_t mask_a = std::uint64_t{1} << (site_a - 1);
  const std::uint64_t mask_b = std::uint64_t{1} << (site_b - 1);
  for (std::size_t s = 0; s < basis.dim; ++s) {
    const bool a = s & mask_a;
    const bool b = s & mask_b;
    if (a == b) continue;
    const std::size_t flipped = s ^ (mask_a | mask_b);
    mat(static_cast<Eigen::Index>(flipped), static_cast<Eigen::Index>(s)) +=
        amplitude;
  }
}

}  // namespace

SymmetricOperator build_xxz(const XxzParams& params, const SpinBasis& basis) {
  if (basis.sites != params.sites) {
    throw std::invalid_argument("build_xxz: basis does not match params.sites");
  }
  if (params.sites % 2 != 0) {
    throw config_error("build_xxz: L must be even so the perturbed site L/2 - 1 exists");
  }
  if (!std::isfinite(params.coupling) || !std::isfinite(params.anisotropy) ||
      !std::isfinite(params.field)) {
    throw config_error("build_xxz: J, Delta, h must be finite");
  }
  const int L = params.sites;
  const double J = params.coupling;
  const double delta = params.anisotropy;
  const double h = params.field;
  const int p = params.perturbed_site();

  SymmetricOperator op;
  op.mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dim),
                                 static_cast<Eigen::Index>(basis.dim));
  op.label = "H_xxz L=" + std::to_string(L) + " h=" + std::to_string(h);

  for (int i = 1; i < L; ++i) add_flip_flop(op.mat, basis, i, i + 1, J / 2.0);

  const std::uint64_t mask_p = std::uint64_t{1} << (p - 1);
  for (std::size_t s = 0; s < basis.dim; ++s) {
    const auto idx = static_cast<Eigen::Index>(s);
    double diag = 0.0;
    for (int i = 1; i < L; ++i) {
      const bool a = (s >> (i - 1)) & 1u;
      const bool b = (s >> i) & 1u;
      diag += J * delta * (a == b ? 0.25 : -0.25);
    }
    diag += h * ((s & mask_p) ? 0.5 : -0.5);  // Sz on the perturbed site
    op.mat(idx, idx) += diag;
  }
  // Sx on the perturbed site flips that single spin with amplitude 1/2.
  if (h != 0.0) {
    for (std::size_t s = 0; s < basis.dim; ++s) {
      const std::size_t flipped = s ^ mask_p;
      op.mat(static_cast<Eigen::Index>(flipped), static_cast<Eigen::Index>(s)) +=
          h * 0.5;
    }
  }
  return op;
}

SymmetricOperator build_nn_exchange(const SpinBasis& basis) {
  if (basis.sites < 2) {
    throw std::invalid_argument("build_nn_exchange: needs L >= 2");
  }
  SymmetricOperator op;
  op.mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dim),
                                 static_cast<Eigen::Index>(basis.dim));
  op.label = "nn_exchange L=" + std::to_string(basis.sites);
  const double amp = 1.0 / (2.0 * basis.sites);
  for (int i = 1; i < basis.sites; ++i) {
    add_flip_flop(op.mat, basis, i, i + 1, amp);
  }
  return op;
}

SymmetricOperator build_nnn_exchange(const SpinBasis& basis) {
  if (basis.sites < 3) {
    throw std::invalid_argument("build_nnn_exchange: needs L >= 3");
  }
  SymmetricOperator op;
  op.mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dim),
                                 static_cast<Eigen::Index>(basis.dim));
  op.label = "nnn_exchange L=" + std::to_string(basis.sites);
  const double amp = 1.0 / (2.0 * basis.sites);
  for (int i = 1; i + 2 <= basis.sites; ++i) {
    add_flip_flop(op.mat, basis, i, i + 2, amp);
  }
  return op;
}

std::vector<double> disorder_profile(const BoseHubbardParams& params) {
  const double w = params.disorder_bound;
  std::mt19937_64 rng(params.seed);
  std::vector<double> eps(static_cast<std::size_t>(params.sites));
  for (double& e : eps) {
    // Map the top 53 bits to [0, 1); redraw the measure-zero endpoints so
    // the open-interval invariant -w < eps_i < w holds exactly.
    do {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      e = -w + 2.0 * w * u;
    } while (w > 0.0 && !(e > -w && e < w));
  }
  return eps;
}

SymmetricOperator build_bose_hubbard(const BoseHubbardParams& params,
                                     const BosonBasis& basis) {
  if (basis.sites != params.sites || basis.bosons != params.bosons) {
    throw std::invalid_argument("build_bose_hubbard: basis does not match (L, N)");
  }
  const int L = params.sites;
  const double J = params.hopping;
  const double U = params.interaction;
  const std::vector<double> eps = disorder_profile(params);

  SymmetricOperator op;
  op.mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dim),
                                 static_cast<Eigen::Index>(basis.dim));
  op.label = "H_bh L=" + std::to_string(L) + " U=" + std::to_string(U) +
             " seed=" + std::to_string(params.seed);

  std::vector<int> hopped(static_cast<std::size_t>(L));
  for (std::size_t a = 0; a < basis.dim; ++a) {
    const std::vector<int>& n = basis.states[a];
    const auto ia = static_cast<Eigen::Index>(a);

    double diag = 0.0;
    for (int i = 0; i < L; ++i) {
      diag += 0.5 * U * n[i] * (n[i] - 1) + eps[static_cast<std::size_t>(i)] * n[i];
    }
    op.mat(ia, ia) += diag;

    // b+_i b_j for both orientations of every bond; the reverse move from
    // the partner state produces the identical sqrt((n_i + 1) n_j) value.
    for (int i = 0; i + 1 < L; ++i) {
      for (const auto [to, from] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
        if (n[static_cast<std::size_t>(from)] == 0) continue;
        hopped = n;
        ++hopped[static_cast<std::size_t>(to)];
        --hopped[static_cast<std::size_t>(from)];
        const std::size_t b = basis.index_of(hopped);
        const double amp = std::sqrt(static_cast<double>(
            (n[static_cast<std::size_t>(to)] + 1) * n[static_cast<std::size_t>(from)]));
        op.mat(static_cast<Eigen::Index>(b), ia) += -J * amp;
      }
    }
  }
  return op;
}

SymmetricOperator build_occupation(const BosonBasis& basis,
                                   BosonObservable variant, int site) {
  if (variant == BosonObservable::site_occupation &&
      (site < 1 || site > basis.sites)) {
    throw std::invalid_argument("build_occupation: site out of range");
  }
  SymmetricOperator op;
  op.mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dim),
                                 static_cast<Eigen::Index>(basis.dim));
  switch (variant) {
    case BosonObservable::total_occupation:
      op.label = "occupation_total";
      break;
    case BosonObservable::half_chain_occupation:
      op.label = "occupation_half_chain";
      break;
    case BosonObservable::site_occupation:
      op.label = "occupation_site_" + std::to_string(site);
      break;
  }
  for (std::size_t a = 0; a < basis.dim; ++a) {
    const std::vector<int>& n = basis.states[a];
    double value = 0.0;
    switch (variant) {
      case BosonObservable::total_occupation:
        for (int v : n) value += v;
        break;
      case BosonObservable::half_chain_occupation:
        for (int i = 0; i < basis.sites / 2; ++i) value += n[static_cast<std::size_t>(i)];
        break;
      case BosonObservable::site_occupation:
        value = n[static_cast<std::size_t>(site - 1)];
        break;
    }
    op.mat(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = value;
  }
  return op;
}

}  // namespace edspec
