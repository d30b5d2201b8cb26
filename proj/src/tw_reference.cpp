#include "twedge/tw_reference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "twedge/ensembles.hpp"
#include "twedge/errors.hpp"
#include "twedge/parallel.hpp"
#include "twedge/stats.hpp"

namespace twedge {

namespace {

constexpr double kNominal[9] = {0.01, 0.05, 0.10, 0.30, 0.50, 0.70, 0.90, 0.95, 0.99};
constexpr double kTw1Quantiles[9] = {-3.90, -3.18, -2.78, -1.91, -1.27, -0.59, 0.45, 0.98, 2.02};
constexpr double kTw2Quantiles[9] = {-3.73, -3.20, -2.90, -2.27, -1.81, -1.33, -0.60, -0.23, 0.48};

constexpr std::string_view kCacheTag = "twedge-tw-reference";

void check_beta(int beta) {
  if (beta != 1 && beta != 2) throw InvalidModel("Tracy-Widom beta must be 1 or 2");
}

}  // namespace

TwReference embedded_tw_table(int beta) {
  check_beta(beta);
  TwReference ref;
  ref.beta = beta;
  ref.source = TwSource::embedded_table;
  const double* q = beta == 1 ? kTw1Quantiles : kTw2Quantiles;
  for (int i = 0; i < 9; ++i) ref.points.push_back({q[i], kNominal[i]});
  return ref;
}

std::vector<double> default_p_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  return grid;
}

TwReference mc_tw_reference(int beta, int dim, int reps, std::uint64_t seed,
                            std::span<const double> p_grid, int threads) {
  check_beta(beta);
  if (dim < 50) throw InvalidModel("mc_tw_reference needs dim >= 50");
  if (reps < 100) throw InvalidModel("mc_tw_reference needs reps >= 100");
  std::vector<double> grid(p_grid.begin(), p_grid.end());
  if (grid.empty()) grid = default_p_grid();

  std::vector<double> edge(reps);
  const double center = 2.0 * std::sqrt(static_cast<double>(dim));
  const double scale = std::pow(static_cast<double>(dim), 1.0 / 6.0);
  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    const auto top = draw_gaussian_ensemble_top(beta, dim, 1, stream_seed(seed, r));
    edge[r] = scale * (top[0] - center);
  });
  std::sort(edge.begin(), edge.end());

  TwReference ref;
  ref.beta = beta;
  ref.source = TwSource::monte_carlo;
  ref.mc_meta = McMeta{dim, reps, seed};
  for (double p : grid) ref.points.push_back({quantile_type7(edge, p), p});
  return ref;
}

double tw_cdf(const TwReference& ref, double x) {
  const auto& pts = ref.points;
  if (pts.size() < 2) throw InvalidModel("Tracy-Widom reference needs at least two points");
  const auto& first = pts[0];
  const auto& second = pts[1];
  if (x < first.x) {
    const double rate = std::log(second.p / first.p) / (second.x - first.x);
    return first.p * std::exp(rate * (x - first.x));
  }
  const auto& last = pts[pts.size() - 1];
  const auto& before = pts[pts.size() - 2];
  if (x > last.x) {
    const double rate = std::log((1.0 - before.p) / (1.0 - last.p)) / (last.x - before.x);
    return 1.0 - (1.0 - last.p) * std::exp(-rate * (x - last.x));
  }
  const auto it = std::upper_bound(pts.begin(), pts.end(), x,
                                   [](double v, const TwPoint& p) { return v < p.x; });
  if (it == pts.end()) return last.p;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.p + (x - lo.x) / (hi.x - lo.x) * (hi.p - lo.p);
}

void save_tw_reference(const TwReference& ref, const std::filesystem::path& path) {
  if (!ref.mc_meta) throw InvalidModel("only Monte-Carlo references are cached");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write cache file " + path.string());
  out << "# " << kCacheTag << " beta=" << ref.beta << " dim=" << ref.mc_meta->dim
      << " reps=" << ref.mc_meta->reps << " seed=" << ref.mc_meta->seed
      << " grid=" << ref.points.size() << '\n';
  out << std::setprecision(17);
  for (const auto& p : ref.points) out << p.x << ' ' << p.p << '\n';
}

std::optional<TwReference> load_tw_reference(const std::filesystem::path& path, int beta,
                                             const McMeta& meta, std::size_t grid_size) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header;
  std::getline(in, header);
  std::ostringstream expected;
  expected << "# " << kCacheTag << " beta=" << beta << " dim=" << meta.dim
           << " reps=" << meta.reps << " seed=" << meta.seed << " grid=" << grid_size;
  if (header != expected.str()) return std::nullopt;

  TwReference ref;
  ref.beta = beta;
  ref.source = TwSource::monte_carlo;
  ref.mc_meta = meta;
  double x = 0.0;
  double p = 0.0;
  while (in >> x >> p) ref.points.push_back({x, p});
  if (ref.points.size() != grid_size) return std::nullopt;
  return ref;
}

TwReference cached_mc_tw_reference(const std::filesystem::path& path, int beta, int dim, int reps,
                                   std::uint64_t seed, std::span<const double> p_grid,
                                   int threads) {
  const std::size_t grid_size = p_grid.empty() ? default_p_grid().size() : p_grid.size();
  if (auto cached = load_tw_reference(path, beta, McMeta{dim, reps, seed}, grid_size)) {
    // Grid values themselves are part of the cache contract.
    bool same_grid = true;
    const std::vector<double> grid =
        p_grid.empty() ? default_p_grid() : std::vector<double>(p_grid.begin(), p_grid.end());
    for (std::size_t i = 0; i < grid.size(); ++i)
      same_grid = same_grid && cached->points[i].p == grid[i];
    if (same_grid) return *cached;
  }
  TwReference ref = mc_tw_reference(beta, dim, reps, seed, p_grid, threads);
  save_tw_reference(ref, path);
  return ref;
}

}  // namespace twedge
