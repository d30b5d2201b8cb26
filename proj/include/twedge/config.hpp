#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twedge/ensembles.hpp"
#include "twedge/hypothesis_tests.hpp"

namespace twedge {

enum class Experiment { edge_params, quantile_table, onatski_null, test_run, size_power, diagnostics };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

/// One batch run. Field names match the JSON keys one to one; unknown keys
/// are rejected. Unset fields take per-experiment defaults from
/// default_config().
struct ExperimentConfig {
  Experiment experiment = Experiment::edge_params;
  std::vector<std::pair<int, int>> shapes;  ///< (M, N)
  int replications = 2000;
  std::uint64_t seed = 1;
  std::vector<SigmaModel> sigma_models;  ///< "sigma_model" or "sigma_models"
  EntryKind entry_dist = EntryKind::gauss_real;
  int beta = 1;
  double level = 0.05;
  std::optional<AlternativeSpec> alt;
  std::string output;  ///< empty: stdout
  double margin_threshold = 0.05;

  // quantile_table
  std::vector<std::string> cases;  ///< presets R1 R2 C1 C2 CP; empty: custom

  // size_power
  Setting setting = Setting::I;
  std::vector<std::string> alternatives;  ///< "null" or family names
  std::vector<double> taus;

  // null table used by onatski_null, test_run and size_power
  int null_dim = kDefaultNullDim;
  int null_reps = kDefaultNullReps;
  std::uint64_t null_seed = 1;
  std::string null_cache;       ///< cache path; rebuilt when the header differs
  std::string null_table_file;  ///< prebuilt table, used as is

  // diagnostics
  std::vector<int> sizes;
  double dimension_ratio = 1.0;
  int delocalization_m = 200;
  int trace_checks = 20;

  int threads = 0;  ///< 0: TWEDGE_THREADS or 1
};

ExperimentConfig default_config(Experiment e);

/// Throws ConfigError on unknown fields, wrong types or invalid values.
ExperimentConfig parse_config(const nlohmann::json& j, std::optional<Experiment> expected = {});
ExperimentConfig load_config(const std::string& path, std::optional<Experiment> expected = {});

/// Checks replications >= 1, positive shapes, level in (0, 1).
void validate(const ExperimentConfig& config);

int effective_threads(const ExperimentConfig& config);

}  // namespace twedge
