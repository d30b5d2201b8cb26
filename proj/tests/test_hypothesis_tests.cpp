#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "twedge/errors.hpp"
#include "twedge/hypothesis_tests.hpp"
#include "twedge/rng.hpp"

namespace {

using twedge::AltFamily;
using twedge::AlternativeSpec;
using twedge::Setting;

const twedge::NullTable& default_null() {
  static const twedge::NullTable table = twedge::cached_null_table(
      std::filesystem::path(TWEDGE_TEST_CACHE_DIR) / "null_table_default.txt", 1, twedge::kDefaultNullDim,
      twedge::kDefaultNullReps, 1);
  return table;
}

twedge::NullTable fixed_critical(double value) {
  twedge::NullTable t;
  t.sorted_ratios = {value, value};
  return t;
}

// Data whose sample covariance N^{-1} Y Y^T is diag(l1, l2, l3, 0, ...).
Eigen::MatrixXd data_with_eigenvalues(double l1, double l2, double l3, int m, int n) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m, n);
  y(0, 0) = std::sqrt(n * l1);
  y(1, 1) = std::sqrt(n * l2);
  y(2, 2) = std::sqrt(n * l3);
  return y;
}

std::vector<double> top3_dense_oracle(const twedge::PopulationModel& pop, std::uint64_t seed, int m, int n,
                                      const Eigen::MatrixXd& t) {
  twedge::Rng rng = twedge::make_rng(seed);
  Eigen::MatrixXd z(m, n);
  twedge::fill_entries(twedge::EntryKind::discrete_u_real, rng, z);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root(t);
  const Eigen::MatrixXd y = pop.sigma_sqrt * z * root.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(y * y.transpose() / n, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(m - 1), es.eigenvalues()(m - 2), es.eigenvalues()(m - 3)};
}

double rate(const twedge::SizePowerSpec& spec) {
  return twedge::size_power_experiment(spec, default_null()).front().rejection_rate;
}

}  // namespace

TEST(Statistic, Examples) {
  EXPECT_EQ(twedge::onatski_statistic(5, 3, 2), 2.0);
  EXPECT_EQ(twedge::onatski_statistic(10, 6, 4), 2.0);
  EXPECT_EQ(twedge::onatski_statistic(5, 3, 3), std::numeric_limits<double>::infinity());
  EXPECT_EQ(twedge::onatski_statistic(3, 3, 1), 0.0);
  EXPECT_THROW(twedge::onatski_statistic(2, 2, 2), twedge::DegenerateSpectrum);
  EXPECT_THROW(twedge::onatski_statistic(1, 2, 3), twedge::InvalidModel);
}

TEST(Statistic, ExactScaleInvariance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> e(-20, 20);
  for (int i = 0; i < 100000; ++i) {
    double l[3] = {u(rng), u(rng), u(rng)};
    std::sort(l, l + 3, std::greater<>());
    if (l[0] == l[2]) continue;
    const double alpha = std::ldexp(1.0, e(rng));
    ASSERT_EQ(twedge::onatski_statistic(alpha * l[0], alpha * l[1], alpha * l[2]),
              twedge::onatski_statistic(l[0], l[1], l[2]));
  }
}

TEST(CriticalValue, TypeSevenConvention) {
  twedge::NullTable t;
  t.sorted_ratios.resize(100);
  std::iota(t.sorted_ratios.begin(), t.sorted_ratios.end(), 1.0);
  EXPECT_NEAR(twedge::critical_value(t, 0.05), 95.05, 1e-12);
  EXPECT_NEAR(twedge::critical_value(t, 0.5), 50.5, 1e-12);
}

TEST(NullTable, SortedNonnegativeDeterministic) {
  const auto a = twedge::build_null_table(1, 60, 500, 4);
  const auto b = twedge::build_null_table(1, 60, 500, 4);
  const auto c = twedge::build_null_table(1, 60, 500, 4, 3);
  EXPECT_EQ(a.sorted_ratios, b.sorted_ratios);
  EXPECT_EQ(a.sorted_ratios, c.sorted_ratios);
  EXPECT_TRUE(std::is_sorted(a.sorted_ratios.begin(), a.sorted_ratios.end()));
  EXPECT_GE(a.sorted_ratios.front(), 0.0);
  EXPECT_EQ(a.sorted_ratios.size(), 500u);
  EXPECT_EQ(a.meta.dim, 60);
  EXPECT_EQ(a.meta.reps, 500);
  EXPECT_EQ(a.meta.seed, 4u);
  EXPECT_THROW(twedge::build_null_table(1, 40, 500, 4), twedge::InvalidModel);
  EXPECT_THROW(twedge::build_null_table(1, 60, 499, 4), twedge::InvalidModel);
}

TEST(NullTable, MedianAndMonotoneLevels) {
  const auto& t = default_null();
  const auto& r = t.sorted_ratios;
  EXPECT_NEAR(twedge::critical_value(t, 0.5), 0.5 * (r[2499] + r[2500]), 1e-12);
  double prev = std::numeric_limits<double>::infinity();
  for (double level = 0.001; level < 1.0; level += 0.001) {
    const double v = twedge::critical_value(t, level);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(NullTable, FileRoundTrip) {
  const auto t = twedge::build_null_table(2, 50, 500, 8);
  const auto path = std::filesystem::temp_directory_path() / "twedge_null_roundtrip.txt";
  twedge::save_null_table(t, path);
  const auto back = twedge::load_null_table(path, 2, {50, 500, 8});
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->sorted_ratios, t.sorted_ratios);
  EXPECT_FALSE(twedge::load_null_table(path, 1, {50, 500, 8}).has_value());
  EXPECT_FALSE(twedge::load_null_table(path, 2, {50, 500, 9}).has_value());
  std::filesystem::remove(path);
}

TEST(Alternatives, Strengths) {
  EXPECT_DOUBLE_EQ(twedge::alternative_strength({AltFamily::H1_a, 6, Setting::I}, 4.0), 3.0);
  EXPECT_DOUBLE_EQ(twedge::alternative_strength({AltFamily::H1_a, 6, Setting::II}, 4.0), 6.0);
  EXPECT_DOUBLE_EQ(twedge::alternative_strength({AltFamily::H1_b_spike_e1, 4, Setting::I}, 4.0), 8.0);
  EXPECT_DOUBLE_EQ(twedge::alternative_strength({AltFamily::H1_b_rank1_ones, 4, Setting::II}, 4.0), 16.0);
}

TEST(Alternatives, ZeroStrengthEqualsNull) {
  const auto pop = twedge::build_sigma(twedge::setting_sigma(Setting::I), 40, 1.5);
  for (AltFamily f : {AltFamily::H1_a, AltFamily::H1_b_spike_e1, AltFamily::H1_b_rank1_ones}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto null = twedge::generate_alt_sample(std::nullopt, pop, twedge::EntryKind::discrete_u_real, 40, 60, seed);
      const auto zero = twedge::generate_alt_sample(AlternativeSpec{f, 0.0, Setting::I}, pop,
                                                    twedge::EntryKind::discrete_u_real, 40, 60, seed);
      EXPECT_EQ(null.top_eigenvalues, zero.top_eigenvalues);
    }
  }
}

TEST(Alternatives, TemporalFactorsMatchDenseSquareRoot) {
  const int m = 30, n = 45;
  const double d = double(n) / m;
  const auto pop = twedge::build_sigma(twedge::setting_sigma(Setting::II), m, d);
  for (AltFamily f : {AltFamily::H1_b_spike_e1, AltFamily::H1_b_rank1_ones}) {
    const AlternativeSpec alt{f, 4.0, Setting::II};
    const double rho = twedge::alternative_strength(alt, d);
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
    if (f == AltFamily::H1_b_spike_e1) {
      t(0, 0) += rho;
    } else {
      t += rho * Eigen::MatrixXd::Constant(n, n, 1.0 / n);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
      EXPECT_NEAR(es.eigenvalues()(n - 1), 1 + rho, 1e-12);
      EXPECT_NEAR(es.eigenvalues()(n - 2), 1.0, 1e-12);
      EXPECT_NEAR(es.eigenvalues()(0), 1.0, 1e-12);
    }
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto got = twedge::generate_alt_sample(alt, pop, twedge::EntryKind::discrete_u_real, m, n, seed);
      const auto want = top3_dense_oracle(pop, seed, m, n, t);
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(got.top_eigenvalues[i], want[i], 1e-10 * want[0]);
    }
  }
}

TEST(RunTest, Decisions) {
  const auto crit = fixed_critical(7.16);
  const auto keep = twedge::run_test(data_with_eigenvalues(5, 3, 2, 6, 8), crit, 0.05);
  EXPECT_NEAR(keep.statistic, 2.0, 1e-12);
  EXPECT_FALSE(keep.reject);
  EXPECT_EQ(keep.critical_value, 7.16);
  const auto reject = twedge::run_test(data_with_eigenvalues(13, 3, 2, 6, 8), crit, 0.05);
  EXPECT_NEAR(reject.statistic, 10.0, 1e-12);
  EXPECT_TRUE(reject.reject);
  EXPECT_THROW(twedge::run_test(data_with_eigenvalues(2, 2, 2, 6, 8), crit, 0.05), twedge::DegenerateSpectrum);
}

TEST(RunTest, RescalingKeepsDecision) {
  const auto& table = default_null();
  const auto pop = twedge::build_sigma(twedge::setting_sigma(Setting::I), 20, 1.5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    twedge::Rng rng = twedge::make_rng(seed);
    Eigen::MatrixXd z(20, 30);
    twedge::fill_entries(twedge::EntryKind::gauss_real, rng, z);
    const Eigen::MatrixXd y = pop.sigma_sqrt * z;
    const auto base = twedge::run_test(y, table, 0.05);
    for (double alpha : {1e-3, 0.37, 2.0, 1e4}) {
      const auto scaled = twedge::run_test(alpha * y, table, 0.05);
      EXPECT_EQ(scaled.reject, base.reject);
      EXPECT_NEAR(scaled.statistic, base.statistic, 1e-9 * (1 + base.statistic));
    }
  }
}

TEST(SizePower, GaussianNullSize) {
  const auto& table = default_null();
  const double crit = twedge::critical_value(table, 0.05);
  const auto pop = twedge::build_sigma(twedge::setting_sigma(Setting::I), 100, 1.0);
  int rejected = 0;
  for (int r = 0; r < 2000; ++r) {
    twedge::Rng rng = twedge::make_rng(twedge::stream_seed(606, r));
    Eigen::MatrixXd z(100, 100);
    twedge::fill_entries(twedge::EntryKind::gauss_real, rng, z);
    const auto res = twedge::run_test(pop.sigma_sqrt * z, table, 0.05);
    EXPECT_EQ(res.critical_value, crit);
    rejected += res.reject;
  }
  EXPECT_NEAR(rejected / 2000.0, 0.05, 0.02);
}

TEST(SizePower, PowerIncreasesWithStrength) {
  for (AltFamily f : {AltFamily::H1_a, AltFamily::H1_b_spike_e1}) {
    twedge::SizePowerSpec spec;
    spec.family = f;
    spec.shapes = {{60, 60}};
    spec.reps = 1000;
    spec.seed = 12;
    double prev_rate = -1.0, prev_se = 0.0;
    for (double tau : {0.5, 4.0, 6.0}) {
      spec.tau = tau;
      const auto row = twedge::size_power_experiment(spec, default_null()).front();
      const double se = row.two_se / 2;
      EXPECT_GT(row.rejection_rate - prev_rate, -2 * std::hypot(se, prev_se)) << to_string(f) << " " << tau;
      prev_rate = row.rejection_rate;
      prev_se = se;
    }
  }
}

TEST(SizePower, WeakPerturbationLooksLikeNull) {
  twedge::SizePowerSpec spec;
  spec.shapes = {{60, 60}};
  spec.reps = 2000;
  spec.seed = 3;
  const double null_rate = rate(spec);
  spec.family = AltFamily::H1_a;
  spec.tau = 0.5;
  const double weak = rate(spec);
  EXPECT_NEAR(weak, 0.0577, 0.03);
  EXPECT_NEAR(weak, null_rate, 0.03);
}

TEST(SizePower, SettingTwoTemporalSpikePower) {
  twedge::SizePowerSpec spec;
  spec.setting = Setting::II;
  spec.family = AltFamily::H1_b_spike_e1;
  spec.tau = 4.0;
  spec.shapes = {{100, 100}};
  spec.reps = 2000;
  spec.seed = 5;
  EXPECT_NEAR(rate(spec), 0.9870, 0.02);
}

TEST(SizePower, RowsAndErrors) {
  twedge::SizePowerSpec spec;
  spec.shapes = {{60, 60}, {50, 80}};
  spec.reps = 100;
  const auto rows = twedge::size_power_experiment(spec, default_null(), 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].alternative, "null");
  EXPECT_EQ(rows[1].m, 50);
  EXPECT_EQ(rows[1].n, 80);
  for (const auto& row : rows)
    EXPECT_DOUBLE_EQ(row.two_se, 2 * std::sqrt(row.rejection_rate * (1 - row.rejection_rate) / 100));
  spec.reps = 99;
  EXPECT_THROW(twedge::size_power_experiment(spec, default_null()), twedge::InvalidModel);
}
