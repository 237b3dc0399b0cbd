#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

namespace edspec {

/// Bipartite entanglement entropy (nats) of a normalized pure state of
/// 2^L spins for a contiguous subsystem of subsystem_sites sites.
///
/// The state is reshaped by the bipartition index maps and the entropy is
/// -sum lambda ln lambda over the squared singular values. For
/// subsystem_sites > L/2 the complementary cut is used: the reported value
/// is the entropy of the size-(L - c) subsystem at cut c = L - subsystem_sites,
/// which by the Schmidt decomposition is exactly the entropy of a
/// subsystem_sites-site subsystem. This makes S(L_A) = S(L - L_A) hold
/// per state.
double eigenstate_entropy(std::span<const double> state, int subsystem_sites);

/// Mean entanglement entropy of Haar-random pure states,
/// L_A ln2 - 2^(2 L_A - L) / 2, reflected above L_A = L/2.
double page_curve(int subsystem_sites, int sites);

/// Mean entropy over a set of states for every subsystem size 0..L,
/// normalized by S_max = (L/2) ln 2.
struct EntropyCurve {
  std::vector<int> subsystem_sizes;
  std::vector<double> mean_entropy;  // nats
  double normalization = 0.0;        // (L/2) ln 2
  std::size_t states_averaged = 0;

  std::vector<double> normalized() const;
};

EntropyCurve mean_entropy_curve(const std::vector<Eigen::VectorXd>& states,
                                int sites);

}  // namespace edspec
