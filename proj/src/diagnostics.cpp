#include "twedge/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twedge/errors.hpp"
#include "twedge/parallel.hpp"
#include "twedge/spectral_core.hpp"
#include "twedge/stats.hpp"

namespace twedge {

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return {slope, r2};
}

ScalingFit rigidity_scan(const RigidityConfig& config, int threads) {
  if (config.sizes.size() < 3) throw InsufficientSizes("rigidity_scan needs at least three sizes");
  if (!std::is_sorted(config.sizes.begin(), config.sizes.end()) ||
      std::adjacent_find(config.sizes.begin(), config.sizes.end()) != config.sizes.end())
    throw InsufficientSizes("rigidity_scan sizes must be strictly increasing");
  if (config.sizes.front() < 50) throw InsufficientSizes("rigidity_scan sizes must be >= 50");
  if (config.reps < 4) throw InvalidModel("rigidity_scan needs at least four replicates");

  ScalingFit fit;
  std::vector<double> log_n, log_spread;
  for (int n : config.sizes) {
    const int m = std::max(1, static_cast<int>(std::lround(n / config.d)));
    const double d_n = static_cast<double>(n) / m;
    const PopulationModel pop = build_sigma(config.sigma, m, d_n);
    const EdgeParams ep = edge_params(pop.spectrum, d_n);

    std::vector<double> top(config.reps);
    parallel_for(static_cast<std::size_t>(config.reps), threads, [&](std::size_t r) {
      const auto seed = stream_seed(stream_seed(config.seed, static_cast<std::uint64_t>(n)), r);
      top[r] = draw_sample(pop, config.entries, m, n, 1, seed).top_eigenvalues[0];
    });
    const double mean = std::accumulate(top.begin(), top.end(), 0.0) / top.size();
    std::sort(top.begin(), top.end());
    const double spread = (quantile_type7(top, 0.75) - quantile_type7(top, 0.25)) / 1.349;

    fit.sizes.push_back(n);
    fit.spreads.push_back(spread);
    fit.means.push_back(mean);
    fit.lambda_r.push_back(ep.lambda_r);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_spread.push_back(std::log(spread));
  }
  std::tie(fit.slope, fit.r2) = linear_fit(log_n, log_spread);
  return fit;
}

double sup_norm_statistic(const Eigen::VectorXcd& u) {
  return static_cast<double>(u.size()) * u.cwiseAbs2().maxCoeff();
}

DelocalizationResult delocalization_scan(const DelocalizationConfig& config, int threads) {
  if (config.sigma.kind == SigmaKind::dc_rotated || config.sigma.kind == SigmaKind::dr_rotated)
    throw InvalidModel("delocalization_scan is defined for diagonal sigma only");
  if (config.m < 1 || config.reps < 1) throw InvalidModel("delocalization_scan needs m, reps >= 1");
  const int m = config.m;
  const int n = std::max(1, static_cast<int>(std::lround(config.d * m)));
  const double d_n = static_cast<double>(n) / m;
  const PopulationModel pop = build_sigma(config.sigma, m, d_n);

  DelocalizationResult result;
  result.m = m;
  result.envelope = std::max(1.0, std::pow(std::log(static_cast<double>(m)), 3));
  try {
    edge_params(pop.spectrum, d_n);
  } catch (const EdgeConditionViolated&) {
    result.edge_regular = false;
  }
  if (config.sigma.kind == SigmaKind::dr_spiked_diag && !subcritical_check(pop.spectrum.lambda_max(), d_n))
    result.edge_regular = false;

  std::vector<double> stats(config.reps);
  DrawOptions options;
  options.eigenvector_cap = std::max(kDefaultEigenvectorCap, m);
  parallel_for(static_cast<std::size_t>(config.reps), threads, [&](std::size_t r) {
    const auto draw = draw_sample(pop, config.entries, m, n, 1, stream_seed(config.seed, r), true, options);
    stats[r] = sup_norm_statistic(*draw.top_eigenvector);
  });
  result.max_statistic = *std::max_element(stats.begin(), stats.end());
  result.within_envelope = result.max_statistic <= result.envelope;
  return result;
}

double trace_identity_check(int m, int n, std::complex<double> z, std::uint64_t seed) {
  if (!(z.imag() > 0.0)) throw InvalidModel("trace identity needs Im z > 0");
  if (m < 1 || n < 1 || m > 200 || n > 200) throw InvalidModel("trace identity needs 1 <= m, n <= 200");
  const auto x = std::get<Eigen::MatrixXd>(sample_entries(EntryKind::gauss_real, m, n, seed));
  const Eigen::MatrixXcd small = (x.transpose() * x).cast<std::complex<double>>();  // N x N
  const Eigen::MatrixXcd large = (x * x.transpose()).cast<std::complex<double>>();  // M x M
  const auto trace_resolvent = [z](const Eigen::MatrixXcd& a) {
    const Eigen::MatrixXcd shifted = a - z * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    return shifted.partialPivLu().inverse().trace();
  };
  const std::complex<double> expected = static_cast<double>(m - n) / z;
  const double gap = std::abs(trace_resolvent(small) - trace_resolvent(large) - expected);
  return m == n ? gap : gap / std::abs(expected);
}

}  // namespace twedge
