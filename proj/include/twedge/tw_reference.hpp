#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace twedge {

enum class TwSource { embedded_table, monte_carlo };

struct McMeta {
  int dim = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  friend bool operator==(const McMeta&, const McMeta&) = default;
};

struct TwPoint {
  double x;  ///< quantile
  double p;  ///< cdf value
};

/// Tabulated Tracy-Widom distribution function. Points are strictly
/// increasing in both coordinates with p in (0, 1).
struct TwReference {
  int beta = 1;
  std::vector<TwPoint> points;
  TwSource source = TwSource::embedded_table;
  std::optional<McMeta> mc_meta;
};

/// Nine-point percentile table (p = .01 .05 .10 .30 .50 .70 .90 .95 .99).
TwReference embedded_tw_table(int beta);

/// Default probability grid for Monte-Carlo references: 0.01, 0.02, ..., 0.99.
std::vector<double> default_p_grid();

/// Empirical quantiles of dim^{1/6} (lambda_1 - 2 sqrt(dim)) over `reps`
/// Gaussian-ensemble draws (beta 1: GOE, beta 2: GUE), read off on `p_grid`
/// with type-7 interpolation. Requires dim >= 50 and reps >= 100.
TwReference mc_tw_reference(int beta, int dim, int reps, std::uint64_t seed,
                            std::span<const double> p_grid = {}, int threads = 1);

/// Piecewise-linear interpolation of p against x, with exponential tails
/// fitted to the two extreme points on either side.
double tw_cdf(const TwReference& ref, double x);

/// Text cache of a Monte-Carlo reference. The header records beta, dim, reps,
/// seed and the grid size.
void save_tw_reference(const TwReference& ref, const std::filesystem::path& path);
/// Returns the cached reference only if every header field matches.
std::optional<TwReference> load_tw_reference(const std::filesystem::path& path, int beta,
                                             const McMeta& meta, std::size_t grid_size);
/// Loads from `path` when the header matches, otherwise rebuilds and rewrites.
TwReference cached_mc_tw_reference(const std::filesystem::path& path, int beta, int dim,
                                   int reps, std::uint64_t seed,
                                   std::span<const double> p_grid = {}, int threads = 1);

}  // namespace twedge
