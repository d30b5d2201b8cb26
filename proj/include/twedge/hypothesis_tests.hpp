#pragma once

// Onatski's ratio statistic (l1 - l2) / (l2 - l3), its Gaussian-ensemble null
// distribution, and the two testing problems built on it: signals in
// correlated noise and one-sided identity of a separable covariance.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "twedge/ensembles.hpp"

namespace twedge {

/// (l1 - l2) / (l2 - l3) for l1 >= l2 >= l3. Infinite when l2 == l3 < l1;
/// throws DegenerateSpectrum when all three coincide.
double onatski_statistic(double l1, double l2, double l3);

struct NullMeta {
  int dim = 0;
  int reps = 0;
  std::uint64_t seed = 0;
};

struct NullTable {
  int beta = 1;
  std::vector<double> sorted_ratios;  ///< ascending
  NullMeta meta;
};

inline constexpr int kDefaultNullDim = 400;
inline constexpr int kDefaultNullReps = 5000;

/// Onatski ratios of the top three eigenvalues of `reps` GOE (beta 1) or GUE
/// (beta 2) matrices of size `dim`. Requires dim >= 50 and reps >= 500.
NullTable build_null_table(int beta, int dim, int reps, std::uint64_t seed, int threads = 1);

/// Empirical (1 - level) quantile of the null ratios, type-7 interpolation.
double critical_value(const NullTable& table, double level);

void save_null_table(const NullTable& table, const std::filesystem::path& path);
/// Returns the cached table only if beta, dim, reps and seed all match.
std::optional<NullTable> load_null_table(const std::filesystem::path& path, int beta,
                                         const NullMeta& meta);
/// Reads a table file whatever its header says.
NullTable read_null_table(const std::filesystem::path& path);
NullTable cached_null_table(const std::filesystem::path& path, int beta, int dim, int reps,
                            std::uint64_t seed, int threads = 1);

enum class AltFamily { H1_a, H1_b_spike_e1, H1_b_rank1_ones };
enum class Setting { I, II };

std::string_view to_string(AltFamily family);
AltFamily parse_alt_family(std::string_view name);
std::string_view to_string(Setting setting);
Setting parse_setting(std::string_view name);

struct AlternativeSpec {
  AltFamily family = AltFamily::H1_a;
  double tau = 0.0;
  Setting setting = Setting::I;
};

/// Signal variance rho_a (H1_a) or temporal strength rho_b (H1_b families):
/// rho_a = tau / sqrt(d_n), rho_b = tau * sqrt(d_n), both doubled in setting II.
double alternative_strength(const AlternativeSpec& alt, double d_n);

/// Population model and entry law of a setting: (I) the single-spike D_r,
/// (II) the two-level D_c, both with the five-point real entry law.
SigmaModel setting_sigma(Setting setting);
EntryKind setting_entries(Setting setting);

/// Draws Z (m x n, unit-variance entries of `kind`) from `seed`, forms the
/// data matrix of the alternative and returns the top three eigenvalues of
/// its sample covariance N^{-1} Y Y^*. An empty `alt` gives the null draw;
/// tau = 0 reproduces the null draw bit for bit.
SampleDraw generate_alt_sample(const std::optional<AlternativeSpec>& alt, const PopulationModel& pop,
                               EntryKind kind, int m, int n, std::uint64_t seed);

struct TestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  double level = 0.05;
  bool reject = false;
  int beta = 1;
  NullMeta null_meta;
};

/// Tests a critical value against the top three sample covariance eigenvalues.
TestResult decide(const std::vector<double>& top3, const NullTable& table, double level);

/// Onatski test on an M x N data matrix (columns are observations).
TestResult run_test(const Eigen::MatrixXd& data, const NullTable& table, double level);

struct SizePowerRow {
  Setting setting = Setting::I;
  std::string alternative;  ///< "null" or the family name
  double tau = 0.0;
  int m = 0;
  int n = 0;
  double rejection_rate = 0.0;
  double two_se = 0.0;
};

struct SizePowerSpec {
  Setting setting = Setting::I;
  std::optional<AltFamily> family;  ///< empty: size under the null
  double tau = 0.0;
  std::vector<std::pair<int, int>> shapes;
  int reps = 2000;
  std::uint64_t seed = 0;
  double level = 0.05;
};

/// Rejection frequency per shape. Replicate r of shape (M, N) always uses the
/// same data seed, so rows for different alternatives are paired.
std::vector<SizePowerRow> size_power_experiment(const SizePowerSpec& spec, const NullTable& table,
                                                int threads = 1);

/// Seed of replicate `rep` in the (M, N) cell of an experiment.
std::uint64_t cell_replicate_seed(std::uint64_t seed, int m, int n, int rep);

}  // namespace twedge
