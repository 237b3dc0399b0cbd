#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <span>
#include <vector>

#include "edspec/basis.hpp"
#include "edspec/entanglement.hpp"
#include "edspec/eth.hpp"
#include "edspec/linalg.hpp"
#include "edspec/models.hpp"
#include "edspec/spectral.hpp"
#include "edspec/submatrix.hpp"

namespace py = pybind11;
using namespace edspec;

namespace {

std::span<const double> as_span(const std::vector<double>& v) {
  return {v.data(), v.size()};
}

EigenbasisObservable make_obs(const Eigen::MatrixXd& mat,
                              const Eigen::VectorXd& evals) {
  return EigenbasisObservable{mat, evals, "observable"};
}

BlockEnsemble make_ensemble(const std::vector<Eigen::MatrixXd>& blocks) {
  BlockEnsemble ens;
  if (blocks.empty()) throw std::invalid_argument("empty block list");
  ens.blocks = blocks;
  ens.block_size = static_cast<std::size_t>(blocks.front().rows());
  ens.alpha0.assign(blocks.size(), 0);
  ens.source_label = "python blocks";
  return ens;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dense exact diagonalization of spin/boson chains with "
            "spectral-statistics, eigenbasis-observable, submatrix and "
            "entanglement diagnostics";

  py::class_<SpinBasis>(m, "SpinBasis")
      .def_readonly("sites", &SpinBasis::sites)
      .def_readonly("dim", &SpinBasis::dim)
      .def("bitstring", &SpinBasis::bitstring);
  m.def("spin_basis", &spin_basis, py::arg("sites"));

  py::class_<BosonBasis>(m, "BosonBasis")
      .def_readonly("sites", &BosonBasis::sites)
      .def_readonly("bosons", &BosonBasis::bosons)
      .def_readonly("dim", &BosonBasis::dim)
      .def_readonly("states", &BosonBasis::states)
      .def("index_of", [](const BosonBasis& b, const std::vector<int>& occ) {
        return b.index_of(occ);
      });
  m.def("boson_basis", &boson_basis, py::arg("sites"), py::arg("bosons"));

  py::class_<Bipartition>(m, "Bipartition")
      .def_readonly("left_sites", &Bipartition::left_sites)
      .def_readonly("right_sites", &Bipartition::right_sites)
      .def("row_of", &Bipartition::row_of)
      .def("col_of", &Bipartition::col_of);
  m.def("bipartition", &bipartition, py::arg("basis"), py::arg("left_sites"));

  m.def(
      "build_xxz",
      [](int sites, double coupling, double anisotropy, double field) {
        const SpinBasis basis = spin_basis(sites);
        return build_xxz({sites, coupling, anisotropy, field}, basis).mat;
      },
      py::arg("sites"), py::arg("coupling") = 1.0,
      py::arg("anisotropy") = std::numbers::pi / 4.0, py::arg("field") = 0.0);
  m.def("build_nn_exchange",
        [](int sites) { return build_nn_exchange(spin_basis(sites)).mat; });
  m.def("build_nnn_exchange",
        [](int sites) { return build_nnn_exchange(spin_basis(sites)).mat; });
  m.def(
      "build_bose_hubbard",
      [](int sites, int bosons, double hopping, double interaction,
         double disorder_bound, std::uint64_t seed) {
        const BosonBasis basis = boson_basis(sites, bosons);
        BoseHubbardParams p{sites, bosons, hopping, interaction, disorder_bound, seed};
        return build_bose_hubbard(p, basis).mat;
      },
      py::arg("sites"), py::arg("bosons"), py::arg("hopping") = 1.0,
      py::arg("interaction") = 1.0, py::arg("disorder_bound") = 0.05,
      py::arg("seed") = 1);
  m.def(
      "build_occupation",
      [](int sites, int bosons, const std::string& variant, int site) {
        const BosonBasis basis = boson_basis(sites, bosons);
        BosonObservable v;
        if (variant == "total") {
          v = BosonObservable::total_occupation;
        } else if (variant == "half_chain") {
          v = BosonObservable::half_chain_occupation;
        } else if (variant == "site") {
          v = BosonObservable::site_occupation;
        } else {
          throw std::invalid_argument("variant must be total, half_chain or site");
        }
        return build_occupation(basis, v, site).mat;
      },
      py::arg("sites"), py::arg("bosons"), py::arg("variant") = "half_chain",
      py::arg("site") = 1);

  m.def(
      "eigh",
      [](const Eigen::MatrixXd& mat) {
        const Spectrum s = eigh(SymmetricOperator{mat, "python matrix"});
        return py::make_tuple(s.evals, s.evecs);
      },
      py::arg("matrix"), "Ascending eigenvalues and orthonormal eigenvectors");
  m.def(
      "to_eigenbasis",
      [](const Eigen::MatrixXd& observable, const Eigen::VectorXd& evals,
         const Eigen::MatrixXd& evecs) {
        return to_eigenbasis(SymmetricOperator{observable, "observable"},
                             Spectrum{evals, evecs})
            .mat;
      },
      py::arg("observable"), py::arg("evals"), py::arg("evecs"));

  m.def(
      "unfold",
      [](const std::vector<double>& evals, int poly_degree, double trim_frac) {
        return unfold(as_span(evals), poly_degree, trim_frac).values;
      },
      py::arg("evals"), py::arg("poly_degree") = 12, py::arg("trim_frac") = 0.05);
  m.def(
      "nnsd",
      [](const std::vector<double>& unfolded, int bins) {
        UnfoldedSpectrum u;
        u.values = unfolded;
        const HistogramData h = nnsd(u, bins);
        return py::make_tuple(h.bin_edges, h.densities);
      },
      py::arg("unfolded"), py::arg("bins") = 50);
  m.def(
      "brody_fit",
      [](const std::vector<double>& spacings) {
        const BrodyFit f = brody_fit(as_span(spacings));
        return py::make_tuple(f.gamma, f.quality_warning);
      },
      py::arg("spacings"));
  m.def(
      "number_variance",
      [](const std::vector<double>& unfolded, const std::vector<double>& l_grid) {
        UnfoldedSpectrum u;
        u.values = unfolded;
        return number_variance(u, as_span(l_grid));
      },
      py::arg("unfolded"), py::arg("l_grid"));
  m.def(
      "spacing_ratios",
      [](const std::vector<double>& evals) { return spacing_ratios(as_span(evals)); },
      py::arg("evals"));
  m.def(
      "reference_curve",
      [](const std::string& kind, const std::vector<double>& grid) {
        ReferenceCurve k;
        if (kind == "nnsd_poisson") k = ReferenceCurve::nnsd_poisson;
        else if (kind == "nnsd_wigner") k = ReferenceCurve::nnsd_wigner;
        else if (kind == "pr_poisson") k = ReferenceCurve::pr_poisson;
        else if (kind == "pr_goe") k = ReferenceCurve::pr_goe;
        else if (kind == "nv_poisson") k = ReferenceCurve::nv_poisson;
        else if (kind == "nv_goe") k = ReferenceCurve::nv_goe;
        else throw std::invalid_argument("unknown reference curve: " + kind);
        return reference_curve(k, as_span(grid));
      },
      py::arg("kind"), py::arg("grid"));
  m.def(
      "sff",
      [](const std::vector<std::vector<double>>& windows,
         const std::vector<double>& t_grid) {
        return sff(windows, as_span(t_grid)).values;
      },
      py::arg("windows"), py::arg("t_grid"));
  m.def(
      "sff_single_realization",
      [](const std::vector<double>& unfolded, const std::vector<double>& t_grid,
         int smooth_window) {
        const auto [raw, smooth] =
            sff_single_realization(as_span(unfolded), as_span(t_grid), smooth_window);
        return py::make_tuple(raw.values, smooth.values);
      },
      py::arg("unfolded"), py::arg("t_grid"), py::arg("smooth_window") = 11);
  m.def(
      "partition_spectrum",
      [](const std::vector<double>& evals, std::size_t window_size) {
        return partition_spectrum(as_span(evals), window_size);
      },
      py::arg("evals"), py::arg("window_size"));
  m.def("log_time_grid", &log_time_grid, py::arg("t_min"), py::arg("t_max"),
        py::arg("points"));

  m.def(
      "normalized_energies",
      [](const std::vector<double>& evals) {
        return normalized_energies(as_span(evals));
      },
      py::arg("evals"));
  m.def(
      "diagonal_profile",
      [](const Eigen::MatrixXd& mat, const Eigen::VectorXd& evals, double delta_eps) {
        const DiagonalProfile p = diagonal_profile(make_obs(mat, evals), delta_eps);
        py::dict d;
        d["eps"] = p.eps;
        d["values"] = p.values;
        d["micro_avg"] = p.micro_avg;
        d["delta_mic"] = p.delta_mic;
        return d;
      },
      py::arg("matrix"), py::arg("evals"), py::arg("delta_eps") = 0.02);
  m.def(
      "offdiag_window",
      [](const Eigen::MatrixXd& mat, const Eigen::VectorXd& evals,
         std::size_t pair_count) {
        const OffDiagonalSample s = offdiag_window(make_obs(mat, evals), pair_count);
        py::dict d;
        d["values"] = s.values;
        d["omega"] = s.omega;
        d["ebar"] = s.ebar;
        return d;
      },
      py::arg("matrix"), py::arg("evals"), py::arg("pair_count") = 200);
  m.def(
      "variance_profile",
      [](const Eigen::MatrixXd& mat, const Eigen::VectorXd& evals, int sites,
         std::pair<double, double> ebar_window, double delta_omega,
         std::optional<std::pair<double, double>> fit_window) {
        const VarianceProfile p = variance_profile(make_obs(mat, evals), sites,
                                                   ebar_window, delta_omega, fit_window);
        py::dict d;
        d["omega"] = p.omega;
        d["scaled_variance"] = p.scaled_variance;
        d["counts"] = p.counts;
        d["eta"] = p.decay.eta;
        d["eta_stderr"] = p.decay.eta_stderr;
        d["prefactor"] = p.decay.prefactor;
        return d;
      },
      py::arg("matrix"), py::arg("evals"), py::arg("sites"),
      py::arg("ebar_window") = std::pair<double, double>{-0.5, 0.5},
      py::arg("delta_omega") = 0.05, py::arg("fit_window") = std::nullopt);
  m.def(
      "gaussianity_ratio",
      [](const Eigen::MatrixXd& mat, const Eigen::VectorXd& evals,
         std::pair<double, double> ebar_window, double delta_omega) {
        return gaussianity_ratio(make_obs(mat, evals), ebar_window, delta_omega);
      },
      py::arg("matrix"), py::arg("evals"),
      py::arg("ebar_window") = std::pair<double, double>{-0.5, 0.5},
      py::arg("delta_omega") = 0.1);

  m.def(
      "fit_gaussian_mixture",
      [](const std::vector<double>& samples, int components) {
        const MixtureFit f = fit_gaussian_mixture(as_span(samples), components);
        py::dict d;
        d["weights"] = f.weights;
        d["sigmas"] = f.sigmas;
        d["log_likelihood"] = f.log_likelihood;
        d["aic"] = f.aic;
        return d;
      },
      py::arg("samples"), py::arg("components"));
  m.def(
      "fit_exponential_decay",
      [](const std::vector<double>& omegas, const std::vector<double>& variances,
         double window_lo, double window_hi) {
        const DecayFit f =
            fit_exponential_decay(as_span(omegas), as_span(variances), window_lo, window_hi);
        py::dict d;
        d["eta"] = f.eta;
        d["prefactor"] = f.prefactor;
        d["eta_stderr"] = f.eta_stderr;
        return d;
      },
      py::arg("omegas"), py::arg("variances"), py::arg("window_lo"),
      py::arg("window_hi"));

  m.def(
      "extract_blocks",
      [](const Eigen::MatrixXd& mat, const Eigen::VectorXd& evals,
         std::size_t block_size, std::size_t count, std::size_t trim) {
        const BlockEnsemble ens =
            extract_blocks(make_obs(mat, evals), block_size, count, trim);
        return py::make_tuple(ens.blocks, ens.alpha0);
      },
      py::arg("matrix"), py::arg("evals"), py::arg("block_size"), py::arg("count"),
      py::arg("trim"));
  m.def(
      "variance_ratio",
      [](const Eigen::MatrixXd& block) -> std::optional<double> {
        return variance_ratio(block);
      },
      py::arg("block"));
  m.def(
      "ensemble_spacing_ratios",
      [](const std::vector<Eigen::MatrixXd>& blocks, std::size_t edge_drop) {
        return ensemble_spacing_ratios(make_ensemble(blocks), edge_drop).ratios;
      },
      py::arg("blocks"), py::arg("edge_drop") = 1);
  m.def(
      "block_as_hamiltonian",
      [](const Eigen::MatrixXd& block, std::size_t states_averaged) {
        const EntropyCurve c =
            block_as_hamiltonian(make_ensemble({block}), states_averaged);
        return py::make_tuple(c.subsystem_sizes, c.mean_entropy, c.normalization);
      },
      py::arg("block"), py::arg("states_averaged") = 20);

  m.def(
      "eigenstate_entropy",
      [](const Eigen::VectorXd& state, int subsystem_sites) {
        return eigenstate_entropy(
            std::span<const double>(state.data(), static_cast<std::size_t>(state.size())),
            subsystem_sites);
      },
      py::arg("state"), py::arg("subsystem_sites"));
  m.def("page_curve", &page_curve, py::arg("subsystem_sites"), py::arg("sites"));
  m.def(
      "mean_entropy_curve",
      [](const std::vector<Eigen::VectorXd>& states, int sites) {
        const EntropyCurve c = mean_entropy_curve(states, sites);
        return py::make_tuple(c.subsystem_sizes, c.mean_entropy, c.normalization);
      },
      py::arg("states"), py::arg("sites"));

  m.attr("__version__") = EDSPEC_VERSION;
}
