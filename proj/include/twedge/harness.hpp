#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "twedge/config.hpp"
#include "twedge/diagnostics.hpp"
#include "twedge/hypothesis_tests.hpp"
#include "twedge/spectral_core.hpp"

namespace twedge {

struct QuantileCase {
  std::string label;
  SigmaModel sigma;
  EntryKind entries = EntryKind::gauss_real;
  int beta = 1;
};

/// R1: (D_r, five-point real), R2: rotated D_r, C1: (D_c, five-point complex),
/// C2: rotated D_c, CP: rotated D_c with Pareto complex entries.
QuantileCase quantile_case_preset(std::string_view label);

struct QuantileRow {
  std::string case_label;
  int m = 0;
  int n = 0;
  double tw_quantile = 0.0;
  double nominal_p = 0.0;
  double empirical_p = 0.0;
  double two_se = 0.0;  ///< 2 sqrt(nominal (1 - nominal) / reps)
};

/// Per case and shape: draws `replications` matrices, normalizes lambda_1 by
/// the edge parameters of the population and reads its empirical CDF at the
/// nine embedded TW quantiles. Rotated populations fix one Haar rotation per
/// shape. Every cell is drawn independently.
std::vector<QuantileRow> run_quantile_table(const ExperimentConfig& config, int threads);

struct EdgeRow {
  std::string sigma_model;
  int m = 0;
  int n = 0;
  EdgeParams params;
};

/// Throws EdgeConditionViolated on the first irregular population.
std::vector<EdgeRow> run_edge_params(const ExperimentConfig& config);

/// Expands the alternatives x taus grid ("null" once) and runs each cell.
std::vector<SizePowerRow> run_size_power(const ExperimentConfig& config, const NullTable& table,
                                         int threads);

/// Null table from null_table_file, else null_cache, else built fresh.
NullTable resolve_null_table(const ExperimentConfig& config, int threads);

struct DiagnosticRow {
  std::string diagnostic;
  std::string parameter;
  double value = 0.0;
};

std::vector<DiagnosticRow> run_diagnostics(const ExperimentConfig& config, int threads);

/// Six significant digits, as used in every CSV.
std::string format_number(double v);

void write_quantile_csv(std::ostream& out, const std::vector<QuantileRow>& rows);
void write_size_power_csv(std::ostream& out, const std::vector<SizePowerRow>& rows);
void write_edge_csv(std::ostream& out, const std::vector<EdgeRow>& rows);
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows);
void write_test_result_csv(std::ostream& out, const TestResult& result);

}  // namespace twedge
