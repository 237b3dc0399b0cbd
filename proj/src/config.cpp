#include "edspec/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "edspec/errors.hpp"

namespace edspec {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw config_error("config: " + path + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw config_error("config: unknown key " + path + "." + key);
  }
}

template <typename T>
void fetch(const json& obj, const std::string& path, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error("config: bad value at " + path + "." + key + ": " + e.what());
  }
}

void parse_xxz(const json& obj, XxzParams& p) {
  require_keys(obj, "model.xxz", {"L", "J", "Delta"});
  fetch(obj, "model.xxz", "L", p.sites);
  fetch(obj, "model.xxz", "J", p.coupling);
  fetch(obj, "model.xxz", "Delta", p.anisotropy);
}

void parse_bh(const json& obj, BoseHubbardParams& p) {
  require_keys(obj, "model.bose_hubbard", {"L", "N", "J", "disorder_bound"});
  fetch(obj, "model.bose_hubbard", "L", p.sites);
  fetch(obj, "model.bose_hubbard", "N", p.bosons);
  fetch(obj, "model.bose_hubbard", "J", p.hopping);
  fetch(obj, "model.bose_hubbard", "disorder_bound", p.disorder_bound);
}

void parse_sweep(const json& obj, ExperimentConfig::Sweep& s) {
  require_keys(obj, "sweep", {"h_values", "u_over_j_values", "seeds", "realizations"});
  fetch(obj, "sweep", "h_values", s.h_values);
  fetch(obj, "sweep", "u_over_j_values", s.u_over_j_values);
  fetch(obj, "sweep", "seeds", s.seeds);
  fetch(obj, "sweep", "realizations", s.realizations);
  if (s.h_values.empty()) throw config_error("config: sweep.h_values must not be empty");
  if (s.u_over_j_values.empty()) {
    throw config_error("config: sweep.u_over_j_values must not be empty");
  }
  if (s.seeds.empty()) throw config_error("config: sweep.seeds must not be empty");
  if (s.realizations < 1) throw config_error("config: sweep.realizations must be >= 1");
}

void parse_analysis(const json& obj, ExperimentConfig::Analysis& a) {
  require_keys(
      obj, "analysis",
      {"poly_degree",      "trim_frac",
       "nnsd_bins",        "ratio_bins",
       "numvar_l_min",     "numvar_l_max",
       "numvar_l_points",  "delta_eps",
       "delta_omega",      "gauss_delta_omega",
       "ebar_window",      "fit_window",
       "offdiag_pair_count", "offdiag_bins",
       "block_size_small", "block_count_small",
       "edge_drop",        "block_sizes_large",
       "block_counts_large", "block_trim_frac",
       "bh_block_size",    "bh_block_count",
       "bh_edge_drop",     "sff_t_min",
       "sff_t_max",        "sff_t_points",
       "sff_smooth_window", "entropy_states",
       "block_entropy_states", "block_entropy_size",
       "magnitude_block_size", "min_bin_count"});
  fetch(obj, "analysis", "poly_degree", a.poly_degree);
  fetch(obj, "analysis", "trim_frac", a.trim_frac);
  fetch(obj, "analysis", "nnsd_bins", a.nnsd_bins);
  fetch(obj, "analysis", "ratio_bins", a.ratio_bins);
  fetch(obj, "analysis", "numvar_l_min", a.numvar_l_min);
  fetch(obj, "analysis", "numvar_l_max", a.numvar_l_max);
  fetch(obj, "analysis", "numvar_l_points", a.numvar_l_points);
  fetch(obj, "analysis", "delta_eps", a.delta_eps);
  fetch(obj, "analysis", "delta_omega", a.delta_omega);
  fetch(obj, "analysis", "gauss_delta_omega", a.gauss_delta_omega);
  fetch(obj, "analysis", "ebar_window", a.ebar_window);
  if (obj.contains("fit_window") && !obj.at("fit_window").is_null()) {
    std::array<double, 2> w{};
    fetch(obj, "analysis", "fit_window", w);
    a.fit_window = w;
  }
  fetch(obj, "analysis", "offdiag_pair_count", a.offdiag_pair_count);
  fetch(obj, "analysis", "offdiag_bins", a.offdiag_bins);
  fetch(obj, "analysis", "block_size_small", a.block_size_small);
  fetch(obj, "analysis", "block_count_small", a.block_count_small);
  fetch(obj, "analysis", "edge_drop", a.edge_drop);
  fetch(obj, "analysis", "block_sizes_large", a.block_sizes_large);
  fetch(obj, "analysis", "block_counts_large", a.block_counts_large);
  fetch(obj, "analysis", "block_trim_frac", a.block_trim_frac);
  fetch(obj, "analysis", "bh_block_size", a.bh_block_size);
  fetch(obj, "analysis", "bh_block_count", a.bh_block_count);
  fetch(obj, "analysis", "bh_edge_drop", a.bh_edge_drop);
  fetch(obj, "analysis", "sff_t_min", a.sff_t_min);
  fetch(obj, "analysis", "sff_t_max", a.sff_t_max);
  fetch(obj, "analysis", "sff_t_points", a.sff_t_points);
  fetch(obj, "analysis", "sff_smooth_window", a.sff_smooth_window);
  fetch(obj, "analysis", "entropy_states", a.entropy_states);
  fetch(obj, "analysis", "block_entropy_states", a.block_entropy_states);
  fetch(obj, "analysis", "block_entropy_size", a.block_entropy_size);
  fetch(obj, "analysis", "magnitude_block_size", a.magnitude_block_size);
  fetch(obj, "analysis", "min_bin_count", a.min_bin_count);
  if (a.block_sizes_large.size() != a.block_counts_large.size()) {
    throw config_error(
        "config: analysis.block_sizes_large and block_counts_large must pair up");
  }
}

void parse_output(const json& obj, ExperimentConfig::Output& o) {
  require_keys(obj, "output", {"directory", "format"});
  fetch(obj, "output", "directory", o.directory);
  if (obj.contains("format")) {
    const std::string f = obj.at("format").get<std::string>();
    if (f == "csv") {
      o.format = TableFormat::csv;
    } else if (f == "json") {
      o.format = TableFormat::json;
    } else {
      throw config_error("config: output.format must be csv or json, got " + f);
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  require_keys(doc, "<root>", {"model", "sweep", "analysis", "output"});

  ExperimentConfig cfg;
  if (doc.contains("model")) {
    const json& model = doc.at("model");
    require_keys(model, "model", {"xxz", "bose_hubbard"});
    if (model.contains("xxz")) parse_xxz(model.at("xxz"), cfg.model.xxz);
    if (model.contains("bose_hubbard")) {
      parse_bh(model.at("bose_hubbard"), cfg.model.bose_hubbard);
    }
  }
  if (doc.contains("sweep")) parse_sweep(doc.at("sweep"), cfg.sweep);
  if (doc.contains("analysis")) parse_analysis(doc.at("analysis"), cfg.analysis);
  if (doc.contains("output")) parse_output(doc.at("output"), cfg.output);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "xxz:L=" << model.xxz.sites << ",J=" << format_double(model.xxz.coupling)
     << ",Delta=" << format_double(model.xxz.anisotropy)
     << ";bh:L=" << model.bose_hubbard.sites << ",N=" << model.bose_hubbard.bosons
     << ",J=" << format_double(model.bose_hubbard.hopping)
     << ",w=" << format_double(model.bose_hubbard.disorder_bound) << ";h=";
  for (double h : sweep.h_values) os << format_double(h) << " ";
  os << ";uj=";
  for (double u : sweep.u_over_j_values) os << format_double(u) << " ";
  os << ";seeds=";
  for (auto s : sweep.seeds) os << s << " ";
  os << ";real=" << sweep.realizations;
  os << ";deg=" << analysis.poly_degree << ";trim=" << format_double(analysis.trim_frac)
     << ";deps=" << format_double(analysis.delta_eps)
     << ";dom=" << format_double(analysis.delta_omega)
     << ";gdom=" << format_double(analysis.gauss_delta_omega)
     << ";Ms=" << analysis.block_size_small << "x" << analysis.block_count_small;
  for (std::size_t i = 0; i < analysis.block_sizes_large.size(); ++i) {
    os << "," << analysis.block_sizes_large[i] << "x" << analysis.block_counts_large[i];
  }
  os << ";bh=" << analysis.bh_block_size << "x" << analysis.bh_block_count;
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a over the canonical string
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace edspec
