#include "twedge/config.hpp"

#include <fstream>
#include <set>

#include "twedge/errors.hpp"
#include "twedge/parallel.hpp"

namespace twedge {

namespace {

using nlohmann::json;

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields{
      "experiment", "shapes",      "replications",    "seed",         "sigma_model",
      "sigma_models", "entry_dist", "beta",           "level",        "alt",
      "output",     "margin_threshold", "cases",      "setting",      "alternatives",
      "taus",       "null_dim",    "null_reps",       "null_seed",    "null_cache",
      "null_table_file", "sizes",  "dimension_ratio", "delocalization_m", "trace_checks",
      "threads"};
  return fields;
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown field '" + key + "' in " + where);
}

SigmaModel parse_sigma(const json& j) {
  SigmaModel model;
  if (j.is_string()) {
    model.kind = parse_sigma_kind(j.get<std::string>());
    return model;
  }
  if (!j.is_object()) throw ConfigError("sigma_model must be a string or an object");
  reject_unknown(j, {"kind", "spike", "atoms", "rotation_seed"}, "sigma_model");
  if (!j.contains("kind")) throw ConfigError("sigma_model needs a 'kind'");
  model.kind = parse_sigma_kind(get_as<std::string>(j.at("kind"), "kind"));
  if (j.contains("spike")) model.spike = get_as<double>(j.at("spike"), "spike");
  if (j.contains("rotation_seed"))
    model.rotation_seed = get_as<std::uint64_t>(j.at("rotation_seed"), "rotation_seed");
  if (j.contains("atoms")) {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      const auto pair = get_as<std::vector<double>>(a, "atoms");
      if (pair.size() != 2) throw ConfigError("each atom must be [value, weight]");
      atoms.push_back({pair[0], pair[1]});
    }
    try {
      model.atoms = PopulationSpectrum(std::move(atoms));
    } catch (const InvalidModel& e) {
      throw ConfigError(std::string("sigma_model atoms: ") + e.what());
    }
  }
  if (model.kind == SigmaKind::custom_atoms && !model.atoms)
    throw ConfigError("custom_atoms sigma_model needs 'atoms'");
  return model;
}

AlternativeSpec parse_alt(const json& j) {
  if (!j.is_object()) throw ConfigError("alt must be an object");
  reject_unknown(j, {"family", "tau", "setting"}, "alt");
  AlternativeSpec alt;
  if (!j.contains("family") || !j.contains("tau")) throw ConfigError("alt needs 'family' and 'tau'");
  alt.family = parse_alt_family(get_as<std::string>(j.at("family"), "family"));
  alt.tau = get_as<double>(j.at("tau"), "tau");
  if (j.contains("setting")) alt.setting = parse_setting(get_as<std::string>(j.at("setting"), "setting"));
  return alt;
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::edge_params: return "edge_params";
    case Experiment::quantile_table: return "quantile_table";
    case Experiment::onatski_null: return "onatski_null";
    case Experiment::test_run: return "test_run";
    case Experiment::size_power: return "size_power";
    case Experiment::diagnostics: return "diagnostics";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::edge_params, Experiment::quantile_table, Experiment::onatski_null,
                 Experiment::test_run, Experiment::size_power, Experiment::diagnostics})
    if (to_string(e) == name) return e;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::edge_params: {
      c.shapes = {{100, 100}};
      for (auto k : {SigmaKind::identity, SigmaKind::dc_diag, SigmaKind::dr_spiked_diag}) {
        SigmaModel m;
        m.kind = k;
        c.sigma_models.push_back(m);
      }
      break;
    }
    case Experiment::quantile_table:
      c.shapes = {{100, 100}};
      c.cases = {"R1", "R2", "C1", "C2"};
      break;
    case Experiment::onatski_null:
    case Experiment::test_run:
      break;
    case Experiment::size_power:
      c.shapes = {{60, 60}, {100, 100}};
      c.alternatives = {"null", "H1_a", "H1_b_spike_e1", "H1_b_rank1_ones"};
      c.taus = {0.5, 4.0, 6.0};
      break;
    case Experiment::diagnostics:
      c.sizes = {50, 100, 200, 400};
      c.replications = 500;
      break;
  }
  if (c.sigma_models.empty()) c.sigma_models.push_back(SigmaModel{});
  return c;
}

ExperimentConfig parse_config(const json& j, std::optional<Experiment> expected) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, known_fields(), "config");

  Experiment e;
  if (j.contains("experiment")) {
    e = parse_experiment(get_as<std::string>(j.at("experiment"), "experiment"));
    if (expected && *expected != e)
      throw ConfigError("config is for experiment '" + std::string(to_string(e)) +
                        "' but the subcommand runs '" + std::string(to_string(*expected)) + "'");
  } else if (expected) {
    e = *expected;
  } else {
    throw ConfigError("config needs an 'experiment'");
  }
  ExperimentConfig c = default_config(e);

  if (j.contains("shapes")) {
    c.shapes.clear();
    for (const auto& s : j.at("shapes")) {
      const auto pair = get_as<std::vector<int>>(s, "shapes");
      if (pair.size() != 2) throw ConfigError("each shape must be [M, N]");
      c.shapes.emplace_back(pair[0], pair[1]);
    }
  }
  if (j.contains("replications")) c.replications = get_as<int>(j.at("replications"), "replications");
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("sigma_model") && j.contains("sigma_models"))
    throw ConfigError("give either 'sigma_model' or 'sigma_models', not both");
  if (j.contains("sigma_model")) c.sigma_models = {parse_sigma(j.at("sigma_model"))};
  if (j.contains("sigma_models")) {
    c.sigma_models.clear();
    for (const auto& s : j.at("sigma_models")) c.sigma_models.push_back(parse_sigma(s));
    if (c.sigma_models.empty()) throw ConfigError("sigma_models is empty");
  }
  if (j.contains("entry_dist")) c.entry_dist = parse_entry_kind(get_as<std::string>(j.at("entry_dist"), "entry_dist"));
  if (j.contains("beta")) c.beta = get_as<int>(j.at("beta"), "beta");
  if (j.contains("level")) c.level = get_as<double>(j.at("level"), "level");
  if (j.contains("alt")) c.alt = parse_alt(j.at("alt"));
  if (j.contains("output")) c.output = get_as<std::string>(j.at("output"), "output");
  if (j.contains("margin_threshold")) c.margin_threshold = get_as<double>(j.at("margin_threshold"), "margin_threshold");
  if (j.contains("cases")) c.cases = get_as<std::vector<std::string>>(j.at("cases"), "cases");
  if (j.contains("setting")) c.setting = parse_setting(get_as<std::string>(j.at("setting"), "setting"));
  if (j.contains("alternatives")) c.alternatives = get_as<std::vector<std::string>>(j.at("alternatives"), "alternatives");
  if (j.contains("taus")) c.taus = get_as<std::vector<double>>(j.at("taus"), "taus");
  if (j.contains("null_dim")) c.null_dim = get_as<int>(j.at("null_dim"), "null_dim");
  if (j.contains("null_reps")) c.null_reps = get_as<int>(j.at("null_reps"), "null_reps");
  if (j.contains("null_seed")) c.null_seed = get_as<std::uint64_t>(j.at("null_seed"), "null_seed");
  if (j.contains("null_cache")) c.null_cache = get_as<std::string>(j.at("null_cache"), "null_cache");
  if (j.contains("null_table_file")) c.null_table_file = get_as<std::string>(j.at("null_table_file"), "null_table_file");
  if (j.contains("sizes")) c.sizes = get_as<std::vector<int>>(j.at("sizes"), "sizes");
  if (j.contains("dimension_ratio")) c.dimension_ratio = get_as<double>(j.at("dimension_ratio"), "dimension_ratio");
  if (j.contains("delocalization_m")) c.delocalization_m = get_as<int>(j.at("delocalization_m"), "delocalization_m");
  if (j.contains("trace_checks")) c.trace_checks = get_as<int>(j.at("trace_checks"), "trace_checks");
  if (j.contains("threads")) c.threads = get_as<int>(j.at("threads"), "threads");

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<Experiment> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j, expected);
}

void validate(const ExperimentConfig& c) {
  if (c.replications < 1) throw ConfigError("replications must be >= 1");
  for (const auto& [m, n] : c.shapes)
    if (m < 1 || n < 1) throw ConfigError("shapes must be positive");
  if (!(c.level > 0.0 && c.level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  if (c.beta != 1 && c.beta != 2) throw ConfigError("beta must be 1 or 2");
  if (!(c.dimension_ratio > 0.0)) throw ConfigError("dimension_ratio must be positive");
  if (c.null_dim < 1 || c.null_reps < 1) throw ConfigError("null_dim and null_reps must be positive");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
  for (const auto& a : c.alternatives)
    if (a != "null") parse_alt_family(a);
  for (double t : c.taus)
    if (!(t >= 0.0)) throw ConfigError("taus must be nonnegative");
}

int effective_threads(const ExperimentConfig& config) {
  return config.threads > 0 ? config.threads : default_thread_count();
}

}  // namespace twedge
