#include "edspec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <thread>

#include "edspec/basis.hpp"
#include "edspec/entanglement.hpp"
#include "edspec/errors.hpp"
#include "edspec/eth.hpp"
#include "edspec/models.hpp"
#include "edspec/spectral.hpp"
#include "edspec/submatrix.hpp"
#include "edspec/table.hpp"

namespace edspec {

namespace {

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

constexpr char kCacheMagic[8] = {'E', 'D', 'S', 'P', 'E', 'C', '0', '1'};

}  // namespace

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<Spectrum> SpectrumCache::load(const std::string& key) const {
  const std::filesystem::path path = dir_ / (key + ".spec");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint64_t dim = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0 || dim == 0) {
    return std::nullopt;
  }
  Spectrum s;
  s.evals.resize(static_cast<Eigen::Index>(dim));
  s.evecs.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  in.read(reinterpret_cast<char*>(s.evals.data()),
          static_cast<std::streamsize>(dim * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.evecs.data()),
          static_cast<std::streamsize>(dim * dim * sizeof(double)));
  if (!in) return std::nullopt;
  return s;
}

void SpectrumCache::store(const std::string& key, const Spectrum& spectrum) const {
  const std::filesystem::path path = dir_ / (key + ".spec");
  const std::filesystem::path tmp = dir_ / (key + ".spec.tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw computation_error("cache: cannot write " + tmp.string());
    const auto dim = static_cast<std::uint64_t>(spectrum.dim());
    out.write(kCacheMagic, sizeof(kCacheMagic));
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(spectrum.evals.data()),
              static_cast<std::streamsize>(dim * sizeof(double)));
    out.write(reinterpret_cast<const char*>(spectrum.evecs.data()),
              static_cast<std::streamsize>(dim * dim * sizeof(double)));
    if (!out) throw computation_error("cache: write failed " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int effective_threads(std::optional<int> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("EDSPEC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

using NamedTable = std::pair<std::string, ResultTable>;

// ---------------------------------------------------------------------------
// per-sweep-point context with lazily computed shared artifacts

struct XxzContext {
  const ExperimentConfig& cfg;
  double h;
  Spectrum spectrum;
  std::optional<UnfoldedSpectrum> unfolded_cache;
  std::optional<EigenbasisObservable> nn_cache;
  std::optional<EigenbasisObservable> nnn_cache;

  const UnfoldedSpectrum& unfolded() {
    if (!unfolded_cache) {
      unfolded_cache =
          unfold(std::span<const double>(spectrum.evals.data(),
                                         static_cast<std::size_t>(spectrum.dim())),
                 cfg.analysis.poly_degree, cfg.analysis.trim_frac);
    }
    return *unfolded_cache;
  }

  const EigenbasisObservable& nn() {
    if (!nn_cache) {
      const SpinBasis basis = spin_basis(cfg.model.xxz.sites);
      nn_cache = to_eigenbasis(build_nn_exchange(basis), spectrum);
    }
    return *nn_cache;
  }

  const EigenbasisObservable& nnn() {
    if (!nnn_cache) {
      const SpinBasis basis = spin_basis(cfg.model.xxz.sites);
      nnn_cache = to_eigenbasis(build_nnn_exchange(basis), spectrum);
    }
    return *nnn_cache;
  }

  std::size_t block_trim() const {
    return static_cast<std::size_t>(cfg.analysis.block_trim_frac *
                                    static_cast<double>(spectrum.dim()));
  }
};

std::string xxz_key(const XxzParams& p, double h) {
  return "xxz_L=" + std::to_string(p.sites) + "_J=" + format_double(p.coupling) +
         "_Delta=" + format_double(p.anisotropy) + "_h=" + format_double(h);
}

std::string bh_key(const BoseHubbardParams& p, double u, std::uint64_t seed) {
  return "bh_L=" + std::to_string(p.sites) + "_N=" + std::to_string(p.bosons) +
         "_J=" + format_double(p.hopping) + "_U=" + format_double(u) +
         "_w=" + format_double(p.disorder_bound) + "_seed=" + std::to_string(seed);
}

Spectrum cached_spectrum(const SpectrumCache& cache, const std::string& key,
                         const std::function<SymmetricOperator()>& build) {
  if (auto hit = cache.load(key)) return std::move(*hit);
  Spectrum s = eigh(build());
  cache.store(key, s);
  return s;
}

// ---------------------------------------------------------------------------
// figure families

std::vector<double> centers(const HistogramData& h) {
  std::vector<double> x(h.densities.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = h.center(i);
  return x;
}

NamedTable make_fig2a(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const UnfoldedSpectrum& u = ctx.unfolded();
  const HistogramData hist = nnsd(u, a.nnsd_bins);
  const std::vector<double> s = centers(hist);

  ResultTable t;
  t.add_column("s", s);
  t.add_column("density", hist.densities);
  t.add_column("poisson", reference_curve(ReferenceCurve::nnsd_poisson, s));
  t.add_column("wigner", reference_curve(ReferenceCurve::nnsd_wigner, s));

  const std::vector<double> spacings = u.spacings();
  if (spacings.size() >= 500) {
    const BrodyFit brody = brody_fit(spacings);
    std::vector<double> brody_curve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      brody_curve[i] = brody_pdf(s[i], brody.gamma);
    }
    t.add_column("brody", brody_curve);
    t.set_meta("brody_gamma", brody.gamma);
    if (brody.quality_warning) t.set_meta("brody_warning", "flat_likelihood");
  }
  t.set_meta("levels_retained", static_cast<double>(u.values.size()));
  return {"fig2a_nnsd", std::move(t)};
}

NamedTable make_fig2b(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const UnfoldedSpectrum& u = ctx.unfolded();
  const double span = u.values.back() - u.values.front();
  const double l_max = std::min(a.numvar_l_max, span / 10.0);
  std::vector<double> grid;
  for (int i = 0; i < a.numvar_l_points; ++i) {
    const double l = a.numvar_l_min +
                     (l_max - a.numvar_l_min) * i /
                         std::max(1, a.numvar_l_points - 1);
    if (l > 0.0 && l <= l_max) grid.push_back(l);
  }
  const auto nv = number_variance(u, grid);
  std::vector<double> l(nv.size()), s2(nv.size());
  for (std::size_t i = 0; i < nv.size(); ++i) {
    l[i] = nv[i].first;
    s2[i] = nv[i].second;
  }
  ResultTable t;
  t.add_column("l", l);
  t.add_column("sigma2", s2);
  t.add_column("poisson", reference_curve(ReferenceCurve::nv_poisson, l));
  t.add_column("goe", reference_curve(ReferenceCurve::nv_goe, l));
  return {"fig2b_numvar", std::move(t)};
}

NamedTable make_fig3(XxzContext& ctx) {
  const DiagonalProfile nn = diagonal_profile(ctx.nn(), ctx.cfg.analysis.delta_eps);
  const DiagonalProfile nnn = diagonal_profile(ctx.nnn(), ctx.cfg.analysis.delta_eps);
  ResultTable t;
  t.add_column("eps", nn.eps);
  t.add_column("nn_diag", nn.values);
  t.add_column("nn_micro_avg", nn.micro_avg);
  t.add_column("nn_delta_mic", nn.delta_mic);
  t.add_column("nnn_diag", nnn.values);
  t.add_column("nnn_micro_avg", nnn.micro_avg);
  t.add_column("nnn_delta_mic", nnn.delta_mic);
  t.set_meta("delta_eps", ctx.cfg.analysis.delta_eps);
  return {"fig3_diagonals", std::move(t)};
}

// Histogram of mid-spectrum off-diagonal elements with the single- and
// two-component zero-mean Gaussian fits evaluated on the bin centers.
void offdiag_columns(ResultTable& t, const std::string& prefix,
                     const EigenbasisObservable& obs, int pair_count, int bins) {
  const OffDiagonalSample sample =
      offdiag_window(obs, static_cast<std::size_t>(pair_count));
  double rms = 0.0;
  for (double v : sample.values) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(sample.values.size()));
  const double half_range = 5.0 * rms;
  const HistogramData hist =
      histogram(sample.values, bins, -half_range, half_range);

  const MixtureFit one = fit_gaussian_mixture(sample.values, 1);
  const MixtureFit two = fit_gaussian_mixture(sample.values, 2);
  auto gauss = [](double x, double w, double sigma) {
    return w * std::exp(-0.5 * x * x / (sigma * sigma)) /
           (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  const std::vector<double> z = centers(hist);
  std::vector<double> fit1(z.size()), fit2(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    fit1[i] = gauss(z[i], 1.0, one.sigmas[0]);
    fit2[i] = gauss(z[i], two.weights[0], two.sigmas[0]) +
              gauss(z[i], two.weights[1], two.sigmas[1]);
  }
  t.add_column(prefix + "_z", z);
  t.add_column(prefix + "_density", hist.densities);
  t.add_column(prefix + "_single_gauss", fit1);
  t.add_column(prefix + "_double_gauss", fit2);
  t.set_meta(prefix + "_sigma", one.sigmas[0]);
  t.set_meta(prefix + "_aic_single", one.aic);
  t.set_meta(prefix + "_aic_double", two.aic);
  t.set_meta(prefix + "_w1", two.weights[0]);
  t.set_meta(prefix + "_sigma1", two.sigmas[0]);
  t.set_meta(prefix + "_sigma2", two.sigmas[1]);
}

NamedTable make_fig4(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  ResultTable t;
  offdiag_columns(t, "nn", ctx.nn(), a.offdiag_pair_count, a.offdiag_bins);
  offdiag_columns(t, "nnn", ctx.nnn(), a.offdiag_pair_count, a.offdiag_bins);
  t.set_meta("pair_count", static_cast<double>(a.offdiag_pair_count));
  return {"fig4_offdiag_hist_and_fits", std::move(t)};
}

NamedTable make_fig5(XxzContext& ctx, const EigenbasisObservable& obs,
                     const std::string& obs_name) {
  const auto& a = ctx.cfg.analysis;
  std::optional<std::pair<double, double>> window;
  if (a.fit_window) window = std::pair{(*a.fit_window)[0], (*a.fit_window)[1]};
  const VarianceProfile profile = variance_profile(
      obs, ctx.cfg.model.xxz.sites, {a.ebar_window[0], a.ebar_window[1]},
      a.delta_omega, window, static_cast<std::size_t>(a.min_bin_count));
  ResultTable t;
  t.add_column("omega", profile.omega);
  t.add_column("scaled_variance", profile.scaled_variance);
  std::vector<std::int64_t> counts(profile.counts.begin(), profile.counts.end());
  t.add_column("pair_count", std::move(counts));
  t.set_meta("eta", profile.decay.eta);
  t.set_meta("eta_stderr", profile.decay.eta_stderr);
  t.set_meta("prefactor", profile.decay.prefactor);
  t.set_meta("fit_window_lo", profile.decay.window_lo);
  t.set_meta("fit_window_hi", profile.decay.window_hi);
  t.set_meta("delta_omega", a.delta_omega);
  return {"fig5_variance_decay_obs=" + obs_name, std::move(t)};
}

NamedTable make_fig9(XxzContext& ctx, const EigenbasisObservable& obs,
                     const std::string& obs_name) {
  const auto& a = ctx.cfg.analysis;
  const auto ratio = gaussianity_ratio(obs, {a.ebar_window[0], a.ebar_window[1]},
                                       a.gauss_delta_omega,
                                       static_cast<std::size_t>(a.min_bin_count));
  std::vector<double> omega(ratio.size()), r(ratio.size());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    omega[i] = ratio[i].first;
    r[i] = ratio[i].second;
  }
  ResultTable t;
  t.add_column("omega", omega);
  t.add_column("ratio", r);
  t.add_column("rmt", std::vector<double>(r.size(), std::numbers::pi / 2.0));
  t.set_meta("delta_omega", a.gauss_delta_omega);
  return {"fig9_gaussianity_ratio_obs=" + obs_name, std::move(t)};
}

NamedTable make_fig6_ratios(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const auto M = static_cast<std::size_t>(a.block_size_small);
  const auto count = static_cast<std::size_t>(a.block_count_small);
  const std::size_t trim = ctx.block_trim();

  const std::vector<double> ham_ratios = spacing_ratios(
      std::span<const double>(ctx.spectrum.evals.data(),
                              static_cast<std::size_t>(ctx.spectrum.dim())));
  const BlockEnsemble nn_blocks = extract_blocks(ctx.nn(), M, count, trim);
  const BlockEnsemble nnn_blocks = extract_blocks(ctx.nnn(), M, count, trim);
  const PooledRatios nn_pool =
      ensemble_spacing_ratios(nn_blocks, static_cast<std::size_t>(a.edge_drop));
  const PooledRatios nnn_pool =
      ensemble_spacing_ratios(nnn_blocks, static_cast<std::size_t>(a.edge_drop));

  const HistogramData ham_hist = histogram(ham_ratios, a.ratio_bins, 0.0, 1.0);
  const HistogramData nn_hist = histogram(nn_pool.ratios, a.ratio_bins, 0.0, 1.0);
  const HistogramData nnn_hist = histogram(nnn_pool.ratios, a.ratio_bins, 0.0, 1.0);
  const std::vector<double> r = centers(ham_hist);

  ResultTable t;
  t.add_column("r", r);
  t.add_column("hamiltonian", ham_hist.densities);
  t.add_column("nn_blocks", nn_hist.densities);
  t.add_column("nnn_blocks", nnn_hist.densities);
  t.add_column("pr_poisson", reference_curve(ReferenceCurve::pr_poisson, r));
  t.add_column("pr_goe", reference_curve(ReferenceCurve::pr_goe, r));
  t.set_meta("mean_r_hamiltonian", mean(ham_ratios));
  t.set_meta("mean_r_nn_blocks", mean(nn_pool.ratios));
  t.set_meta("mean_r_nnn_blocks", mean(nnn_pool.ratios));
  t.set_meta("block_size", static_cast<double>(M));
  t.set_meta("block_count", static_cast<double>(count));
  t.set_meta("edge_drop", static_cast<double>(a.edge_drop));
  return {"fig6_spacing_ratios", std::move(t)};
}

NamedTable make_fig6_nnsd_blocks(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  // The largest configured block size carries the long-range comparison.
  const auto M = static_cast<std::size_t>(
      *std::max_element(a.block_sizes_large.begin(), a.block_sizes_large.end()));
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.block_sizes_large.size(); ++i) {
    if (static_cast<std::size_t>(a.block_sizes_large[i]) == M) {
      count = static_cast<std::size_t>(a.block_counts_large[i]);
    }
  }
  const std::size_t trim = ctx.block_trim();
  const BlockEnsemble nn_blocks = extract_blocks(ctx.nn(), M, count, trim);
  const BlockEnsemble nnn_blocks = extract_blocks(ctx.nnn(), M, count, trim);

  // Shared bin edges: the Hamiltonian histogram fixes the spacing range.
  const HistogramData ham = nnsd(ctx.unfolded(), a.nnsd_bins);
  const double s_max = ham.bin_edges.back();
  std::size_t nn_skipped = 0, nnn_skipped = 0;
  const HistogramData nn_hist = ensemble_nnsd(
      nn_blocks, a.poly_degree, a.trim_frac, a.nnsd_bins, s_max, &nn_skipped);
  const HistogramData nnn_hist = ensemble_nnsd(
      nnn_blocks, a.poly_degree, a.trim_frac, a.nnsd_bins, s_max, &nnn_skipped);

  const std::vector<double> s = centers(ham);
  ResultTable t;
  t.add_column("s", s);
  t.add_column("hamiltonian", ham.densities);
  t.add_column("nn_blocks", nn_hist.densities);
  t.add_column("nnn_blocks", nnn_hist.densities);
  t.add_column("poisson", reference_curve(ReferenceCurve::nnsd_poisson, s));
  t.add_column("wigner", reference_curve(ReferenceCurve::nnsd_wigner, s));
  t.set_meta("block_size", static_cast<double>(M));
  t.set_meta("block_count", static_cast<double>(count));
  t.set_meta("skipped_nn", static_cast<double>(nn_skipped));
  t.set_meta("skipped_nnn", static_cast<double>(nnn_skipped));
  return {"fig6_nnsd_blocks", std::move(t)};
}

NamedTable make_fig6_variance_ratio(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const auto M = static_cast<std::size_t>(a.block_size_small);
  const auto count = static_cast<std::size_t>(a.block_count_small);
  const std::size_t trim = ctx.block_trim();
  const BlockEnsemble nn_blocks = extract_blocks(ctx.nn(), M, count, trim);
  const BlockEnsemble nnn_blocks = extract_blocks(ctx.nnn(), M, count, trim);

  std::vector<std::int64_t> index;
  std::vector<double> nn_ratio, nnn_ratio;
  std::vector<std::int64_t> nn_defined, nnn_defined;
  for (std::size_t k = 0; k < count; ++k) {
    index.push_back(static_cast<std::int64_t>(k) + 1);
    const auto rn = variance_ratio(nn_blocks.blocks[k]);
    const auto rnn = variance_ratio(nnn_blocks.blocks[k]);
    nn_ratio.push_back(rn.value_or(0.0));
    nn_defined.push_back(rn.has_value() ? 1 : 0);
    nnn_ratio.push_back(rnn.value_or(0.0));
    nnn_defined.push_back(rnn.has_value() ? 1 : 0);
  }
  ResultTable t;
  t.add_column("block_index", std::move(index));
  t.add_column("nn_ratio", std::move(nn_ratio));
  t.add_column("nn_defined", std::move(nn_defined));
  t.add_column("nnn_ratio", std::move(nnn_ratio));
  t.add_column("nnn_defined", std::move(nnn_defined));
  t.set_meta("block_size", static_cast<double>(M));
  return {"fig6_variance_ratio", std::move(t)};
}

NamedTable make_fig1b(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const auto M = static_cast<std::size_t>(a.magnitude_block_size);
  const BlockEnsemble blocks = extract_blocks(ctx.nnn(), M, 1, ctx.block_trim());
  const Eigen::MatrixXd grid = block_magnitude(blocks, 0);
  std::vector<std::int64_t> row, col;
  std::vector<double> value;
  row.reserve(M * M);
  col.reserve(M * M);
  value.reserve(M * M);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      row.push_back(static_cast<std::int64_t>(i));
      col.push_back(static_cast<std::int64_t>(j));
      value.push_back(grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  ResultTable t;
  t.add_column("i", std::move(row));
  t.add_column("j", std::move(col));
  t.add_column("abs_value", std::move(value));
  t.set_meta("alpha0", static_cast<double>(blocks.alpha0[0]));
  t.set_meta("block_size", static_cast<double>(M));
  return {"fig1b_block_magnitude", std::move(t)};
}

NamedTable make_fig7(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const std::vector<double> t_grid =
      log_time_grid(a.sff_t_min, a.sff_t_max, a.sff_t_points);
  ResultTable t;
  t.add_column("t", t_grid);
  for (std::size_t i = 0; i < a.block_sizes_large.size(); ++i) {
    const auto M = static_cast<std::size_t>(a.block_sizes_large[i]);
    const auto count = static_cast<std::size_t>(a.block_counts_large[i]);
    const std::string suffix = "_M" + std::to_string(M);

    const auto ham_windows = partition_spectrum(ctx.unfolded().values, M);
    const SffCurve ham = sff(ham_windows, t_grid);
    const BlockEnsemble nn_blocks = extract_blocks(ctx.nn(), M, count, ctx.block_trim());
    const BlockEnsemble nnn_blocks =
        extract_blocks(ctx.nnn(), M, count, ctx.block_trim());
    const SffCurve nn_curve =
        ensemble_sff(nn_blocks, t_grid, a.poly_degree, a.trim_frac);
    const SffCurve nnn_curve =
        ensemble_sff(nnn_blocks, t_grid, a.poly_degree, a.trim_frac);

    t.add_column("hamiltonian" + suffix, ham.values);
    t.add_column("nn_blocks" + suffix, nn_curve.values);
    t.add_column("nnn_blocks" + suffix, nnn_curve.values);
    t.set_meta("ham_windows" + suffix, static_cast<double>(ham.window_count));
    t.set_meta("block_count" + suffix, static_cast<double>(count));
  }
  return {"fig7_sff", std::move(t)};
}

NamedTable make_fig10(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const std::vector<double> t_grid =
      log_time_grid(a.sff_t_min, a.sff_t_max, a.sff_t_points);
  const auto [raw, smooth] =
      sff_single_realization(ctx.unfolded().values, t_grid, a.sff_smooth_window);
  ResultTable t;
  t.add_column("t", raw.times);
  t.add_column("sff", raw.values);
  t.add_column("sff_smooth", smooth.values);
  t.set_meta("smooth_window", static_cast<double>(a.sff_smooth_window));
  t.set_meta("levels", static_cast<double>(raw.window_size));
  return {"fig10_sff_single", std::move(t)};
}

NamedTable make_fig8(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const auto dim = static_cast<std::size_t>(ctx.spectrum.dim());
  const auto n_states = static_cast<std::size_t>(a.entropy_states);
  if (n_states > dim) {
    throw std::invalid_argument("entropy: more mid-spectrum states than dim");
  }
  const std::size_t first = (dim - n_states) / 2;
  std::vector<Eigen::VectorXd> states;
  states.reserve(n_states);
  for (std::size_t i = first; i < first + n_states; ++i) {
    states.push_back(ctx.spectrum.evecs.col(static_cast<Eigen::Index>(i)));
  }
  const int L = ctx.cfg.model.xxz.sites;
  const EntropyCurve curve = mean_entropy_curve(states, L);

  std::vector<std::int64_t> la(curve.subsystem_sizes.begin(),
                               curve.subsystem_sizes.end());
  std::vector<double> page(curve.subsystem_sizes.size());
  for (std::size_t i = 0; i < page.size(); ++i) {
    page[i] = page_curve(curve.subsystem_sizes[i], L);
  }
  std::vector<double> page_norm(page.size());
  for (std::size_t i = 0; i < page.size(); ++i) {
    page_norm[i] = page[i] / curve.normalization;
  }
  ResultTable t;
  t.add_column("L_A", std::move(la));
  t.add_column("entropy", curve.mean_entropy);
  t.add_column("entropy_normalized", curve.normalized());
  t.add_column("page", page);
  t.add_column("page_normalized", page_norm);
  t.set_meta("states_averaged", static_cast<double>(curve.states_averaged));
  t.set_meta("normalization", curve.normalization);
  return {"fig8_entropy", std::move(t)};
}

NamedTable make_fig8_blocks(XxzContext& ctx) {
  const auto& a = ctx.cfg.analysis;
  const auto M = static_cast<std::size_t>(a.block_entropy_size);
  const BlockEnsemble nn_blocks = extract_blocks(ctx.nn(), M, 1, ctx.block_trim());
  const BlockEnsemble nnn_blocks = extract_blocks(ctx.nnn(), M, 1, ctx.block_trim());
  const EntropyCurve nn_curve = block_as_hamiltonian(
      nn_blocks, static_cast<std::size_t>(a.block_entropy_states));
  const EntropyCurve nnn_curve = block_as_hamiltonian(
      nnn_blocks, static_cast<std::size_t>(a.block_entropy_states));

  std::vector<std::int64_t> la(nn_curve.subsystem_sizes.begin(),
                               nn_curve.subsystem_sizes.end());
  const int k = static_cast<int>(nn_curve.subsystem_sizes.size()) - 1;
  std::vector<double> page_norm(la.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    page_norm[i] = page_curve(static_cast<int>(la[i]), k) / nn_curve.normalization;
  }
  ResultTable t;
  t.add_column("L_A", std::move(la));
  t.add_column("nn_entropy_normalized", nn_curve.normalized());
  t.add_column("nnn_entropy_normalized", nnn_curve.normalized());
  t.add_column("page_normalized", page_norm);
  t.set_meta("block_size", static_cast<double>(M));
  t.set_meta("states_averaged", static_cast<double>(a.block_entropy_states));
  return {"fig8_entropy_blocks", std::move(t)};
}

NamedTable make_fig11(const ExperimentConfig& cfg, double u_over_j) {
  const auto& a = cfg.analysis;
  const BosonBasis basis =
      boson_basis(cfg.model.bose_hubbard.sites, cfg.model.bose_hubbard.bosons);

  std::vector<double> pooled;
  std::size_t degenerate = 0;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t base : cfg.sweep.seeds) {
    for (int k = 0; k < cfg.sweep.realizations; ++k) {
      seeds.push_back(base + static_cast<std::uint64_t>(k));
    }
  }
  const SpectrumCache cache(std::filesystem::path(cfg.output.directory) / "cache");
  for (std::uint64_t seed : seeds) {
    BoseHubbardParams params = cfg.model.bose_hubbard;
    params.interaction = u_over_j * params.hopping;
    params.seed = seed;
    const Spectrum spec =
        cached_spectrum(cache, bh_key(cfg.model.bose_hubbard, params.interaction, seed),
                        [&] { return build_bose_hubbard(params, basis); });
    const EigenbasisObservable occ = to_eigenbasis(
        build_occupation(basis, BosonObservable::half_chain_occupation), spec);
    const auto trim = static_cast<std::size_t>(
        a.block_trim_frac * static_cast<double>(spec.dim()));
    const BlockEnsemble blocks =
        extract_blocks(occ, static_cast<std::size_t>(a.bh_block_size),
                       static_cast<std::size_t>(a.bh_block_count), trim);
    const PooledRatios pool =
        ensemble_spacing_ratios(blocks, static_cast<std::size_t>(a.bh_edge_drop));
    pooled.insert(pooled.end(), pool.ratios.begin(), pool.ratios.end());
    degenerate += pool.degenerate_count;
  }

  const HistogramData hist = histogram(pooled, a.ratio_bins, 0.0, 1.0);
  const std::vector<double> r = centers(hist);
  ResultTable t;
  t.add_column("r", r);
  t.add_column("density", hist.densities);
  t.add_column("pr_poisson", reference_curve(ReferenceCurve::pr_poisson, r));
  t.add_column("pr_goe", reference_curve(ReferenceCurve::pr_goe, r));
  t.set_meta("mean_r", mean(pooled));
  t.set_meta("u_over_j", u_over_j);
  t.set_meta("block_size", static_cast<double>(a.bh_block_size));
  t.set_meta("block_count", static_cast<double>(a.bh_block_count));
  t.set_meta("realizations", static_cast<double>(seeds.size()));
  t.set_meta("degenerate_ratios", static_cast<double>(degenerate));
  return {"fig11_bh_spacing_ratios", std::move(t)};
}

// ---------------------------------------------------------------------------
// runner

struct FamilySet {
  bool spectrum = false;
  bool eth = false;
  bool submatrix = false;
  bool sff = false;
  bool entropy = false;
  bool bose_hubbard = false;
};

FamilySet families_for(const std::string& subcommand) {
  FamilySet f;
  if (subcommand == "spectrum") {
    f.spectrum = true;
  } else if (subcommand == "eth") {
    f.eth = true;
  } else if (subcommand == "submatrix") {
    f.submatrix = true;
  } else if (subcommand == "sff") {
    f.sff = true;
  } else if (subcommand == "entropy") {
    f.entropy = true;
  } else if (subcommand == "bose-hubbard") {
    f.bose_hubbard = true;
  } else if (subcommand == "all") {
    f = FamilySet{true, true, true, true, true, true};
  } else {
    throw config_error("unknown subcommand: " + subcommand);
  }
  return f;
}

std::vector<NamedTable> run_xxz_point(const ExperimentConfig& cfg,
                                      const FamilySet& fams, double h,
                                      const SpectrumCache& cache) {
  XxzParams params = cfg.model.xxz;
  params.field = h;
  const SpinBasis basis = spin_basis(params.sites);
  XxzContext ctx{cfg, h,
                 cached_spectrum(cache, xxz_key(cfg.model.xxz, h),
                                 [&] { return build_xxz(params, basis); })};

  std::vector<NamedTable> tables;
  try {
    if (fams.spectrum) {
      tables.push_back(make_fig2a(ctx));
      tables.push_back(make_fig2b(ctx));
    }
    if (fams.eth) {
      tables.push_back(make_fig3(ctx));
      tables.push_back(make_fig4(ctx));
      tables.push_back(make_fig5(ctx, ctx.nn(), "nn"));
      tables.push_back(make_fig5(ctx, ctx.nnn(), "nnn"));
      tables.push_back(make_fig9(ctx, ctx.nn(), "nn"));
      tables.push_back(make_fig9(ctx, ctx.nnn(), "nnn"));
    }
    if (fams.submatrix) {
      tables.push_back(make_fig6_ratios(ctx));
      tables.push_back(make_fig6_nnsd_blocks(ctx));
      tables.push_back(make_fig6_variance_ratio(ctx));
      tables.push_back(make_fig1b(ctx));
    }
    if (fams.sff) {
      tables.push_back(make_fig7(ctx));
      tables.push_back(make_fig10(ctx));
    }
    if (fams.entropy) {
      tables.push_back(make_fig8(ctx));
      tables.push_back(make_fig8_blocks(ctx));
    }
  } catch (const std::invalid_argument& e) {
    throw feasibility_error("analysis infeasible at L=" +
                            std::to_string(cfg.model.xxz.sites) + ": " + e.what());
  }
  for (auto& [name, table] : tables) {
    table.set_meta("h", h);
    name += "_h=" + format_param(h);
  }
  return tables;
}

std::vector<NamedTable> run_bh_point(const ExperimentConfig& cfg, double uj) {
  std::vector<NamedTable> tables;
  try {
    tables.push_back(make_fig11(cfg, uj));
  } catch (const std::invalid_argument& e) {
    throw feasibility_error("analysis infeasible at L=" +
                            std::to_string(cfg.model.bose_hubbard.sites) + ": " +
                            e.what());
  }
  for (auto& [name, table] : tables) name += "_uj=" + format_param(uj);
  return tables;
}

// Fixed-size worker pool; results land in task order regardless of the
// execution schedule.
std::vector<std::vector<NamedTable>> run_pool(
    const std::vector<std::function<std::vector<NamedTable>()>>& tasks,
    int threads) {
  std::vector<std::vector<NamedTable>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

std::vector<std::filesystem::path> run_experiment(const std::string& subcommand,
                                                  ExperimentConfig cfg,
                                                  const RunOptions& options) {
  const FamilySet fams = families_for(subcommand);
  if (options.out_dir) cfg.output.directory = *options.out_dir;
  if (options.system_size) {
    if (subcommand == "bose-hubbard") {
      cfg.model.bose_hubbard.sites = *options.system_size;
    } else {
      cfg.model.xxz.sites = *options.system_size;
    }
  }
  if (options.seed) cfg.sweep.seeds = {*options.seed};
  const int threads = effective_threads(options.threads);

  const std::filesystem::path out_dir(cfg.output.directory);
  std::filesystem::create_directories(out_dir);
  const SpectrumCache cache(out_dir / "cache");

  std::vector<std::function<std::vector<NamedTable>()>> tasks;
  const bool xxz_any =
      fams.spectrum || fams.eth || fams.submatrix || fams.sff || fams.entropy;
  if (xxz_any) {
    for (double h : cfg.sweep.h_values) {
      tasks.emplace_back([&cfg, &fams, h, &cache] {
        return run_xxz_point(cfg, fams, h, cache);
      });
    }
  }
  if (fams.bose_hubbard) {
    for (double uj : cfg.sweep.u_over_j_values) {
      tasks.emplace_back([&cfg, uj] { return run_bh_point(cfg, uj); });
    }
  }

  const auto results = run_pool(tasks, threads);

  std::vector<std::filesystem::path> written;
  const std::string ext = cfg.output.format == TableFormat::csv ? ".csv" : ".json";
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "0x%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  for (const auto& group : results) {
    for (const auto& [name, table] : group) {
      ResultTable annotated = table;
      annotated.set_meta("config_hash", hash_buf);
      annotated.set_meta("version", EDSPEC_VERSION);
      annotated.set_meta("seed", std::to_string(cfg.sweep.seeds.front()));
      const std::filesystem::path path = out_dir / (name + ext);
      annotated.write(path, cfg.output.format);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace edspec
