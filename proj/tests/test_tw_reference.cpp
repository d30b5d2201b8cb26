#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "twedge/tw_reference.hpp"

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

double max_gap_to_table(const twedge::TwReference& mc, const twedge::TwReference& table) {
  double gap = 0.0;
  for (const auto& pt : table.points) gap = std::max(gap, std::abs(twedge::tw_cdf(mc, pt.x) - pt.p));
  return gap;
}

}  // namespace

TEST(EmbeddedTable, PrintedValues) {
  const auto t1 = twedge::embedded_tw_table(1);
  const auto t2 = twedge::embedded_tw_table(2);
  const double x1[] = {-3.90, -3.18, -2.78, -1.91, -1.27, -0.59, 0.45, 0.98, 2.02};
  const double x2[] = {-3.73, -3.20, -2.90, -2.27, -1.81, -1.33, -0.60, -0.23, 0.48};
  const double p[] = {.01, .05, .10, .30, .50, .70, .90, .95, .99};
  ASSERT_EQ(t1.points.size(), 9u);
  ASSERT_EQ(t2.points.size(), 9u);
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(t1.points[i].x, x1[i]);
    EXPECT_EQ(t2.points[i].x, x2[i]);
    EXPECT_EQ(t1.points[i].p, p[i]);
    EXPECT_EQ(t2.points[i].p, p[i]);
  }
  EXPECT_EQ(t1.points[4].x, -1.27);
  EXPECT_EQ(t2.points[4].x, -1.81);
  EXPECT_EQ(t1.source, twedge::TwSource::embedded_table);
  EXPECT_FALSE(t1.mc_meta.has_value());
  for (const auto* t : {&t1, &t2})
    for (std::size_t i = 1; i < t->points.size(); ++i) {
      EXPECT_GT(t->points[i].x, t->points[i - 1].x);
      EXPECT_GT(t->points[i].p, t->points[i - 1].p);
    }
}

TEST(TwCdf, Examples) {
  const auto t2 = twedge::embedded_tw_table(2);
  EXPECT_NEAR(twedge::tw_cdf(t2, -1.81), 0.50, 1e-15);
  EXPECT_NEAR(twedge::tw_cdf(t2, -3.05), 0.075, 1e-12);
  for (double x : {-3.74, -4.5, -10.0, -100.0}) {
    const double p = twedge::tw_cdf(t2, x);
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 0.01);
  }
  for (double x : {0.5, 3.0}) {
    const double p = twedge::tw_cdf(t2, x);
    EXPECT_GE(p, 0.99);
    EXPECT_LT(p, 1.0);
  }
  EXPECT_LE(twedge::tw_cdf(t2, 100.0), 1.0);
}

TEST(TwCdf, NondecreasingOnDenseGrid) {
  for (int beta : {1, 2}) {
    const auto t = twedge::embedded_tw_table(beta);
    double prev = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double p = twedge::tw_cdf(t, -8.0 + 12.0 * i / 20000);
      EXPECT_GE(p, prev);
      prev = p;
    }
  }
}

TEST(McReference, GridSizeAndDeterminism) {
  const auto a = twedge::mc_tw_reference(1, 60, 100, 5);
  EXPECT_EQ(a.points.size(), twedge::default_p_grid().size());
  EXPECT_EQ(a.points.size(), 99u);
  EXPECT_EQ(a.source, twedge::TwSource::monte_carlo);
  ASSERT_TRUE(a.mc_meta.has_value());
  EXPECT_EQ(*a.mc_meta, (twedge::McMeta{60, 100, 5}));
  const auto b = twedge::mc_tw_reference(1, 60, 100, 5);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].x, b.points[i].x);
    EXPECT_EQ(a.points[i].p, b.points[i].p);
  }
  const std::vector<double> grid{0.1, 0.5, 0.9};
  EXPECT_EQ(twedge::mc_tw_reference(2, 50, 100, 5, grid).points.size(), 3u);
}

TEST(McReference, ThreadCountDoesNotChangeResult) {
  const auto a = twedge::mc_tw_reference(2, 60, 200, 9, {}, 1);
  const auto b = twedge::mc_tw_reference(2, 60, 200, 9, {}, 3);
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].x, b.points[i].x);
}

TEST(McReference, ComplexMedianMatchesTable) {
  const auto mc = twedge::mc_tw_reference(2, 400, 5000, 2014);
  const double p = twedge::tw_cdf(mc, -1.81);
  EXPECT_GE(p, 0.46);
  EXPECT_LE(p, 0.54);
}

TEST(McReference, DriftsTowardTableWithDimension) {
  const int reps = 4000;
  // Binomial standard error of a CDF value near 0.5.
  const double se = std::sqrt(0.25 / reps);
  for (int beta : {1, 2}) {
    const auto table = twedge::embedded_tw_table(beta);
    double prev = 1.0;
    for (int dim : {50, 100, 200}) {
      const double gap = max_gap_to_table(twedge::mc_tw_reference(beta, dim, reps, 31 + dim), table);
      EXPECT_LE(gap, prev + 2 * std::sqrt(2.0) * se) << "beta " << beta << " dim " << dim;
      prev = gap;
    }
  }
}

TEST(Cache, RoundTripAndMismatch) {
  const auto path = temp_file("twedge_tw_cache_test.txt");
  std::filesystem::remove(path);
  const auto built = twedge::cached_mc_tw_reference(path, 1, 60, 150, 3);
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto loaded = twedge::load_tw_reference(path, 1, {60, 150, 3}, built.points.size());
  ASSERT_TRUE(loaded.has_value());
  for (std::size_t i = 0; i < built.points.size(); ++i) {
    EXPECT_EQ(loaded->points[i].x, built.points[i].x);
    EXPECT_EQ(loaded->points[i].p, built.points[i].p);
  }
  EXPECT_FALSE(twedge::load_tw_reference(path, 1, {60, 150, 4}, built.points.size()).has_value());
  EXPECT_FALSE(twedge::load_tw_reference(path, 2, {60, 150, 3}, built.points.size()).has_value());
  EXPECT_FALSE(twedge::load_tw_reference(path, 1, {60, 150, 3}, 10).has_value());

  const auto rebuilt = twedge::cached_mc_tw_reference(path, 1, 60, 150, 4);
  EXPECT_EQ(rebuilt.mc_meta->seed, 4u);
  EXPECT_TRUE(twedge::load_tw_reference(path, 1, {60, 150, 4}, rebuilt.points.size()).has_value());
  std::filesystem::remove(path);
}
