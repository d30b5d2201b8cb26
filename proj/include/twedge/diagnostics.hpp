#pragma once

// Monte-Carlo checks of the local-law conclusions near the right edge:
// N^{-2/3} rigidity of lambda_1, delocalization of u_1, and the exact trace
// relation between the two Green functions.

#include <complex>
#include <cstdint>
#include <vector>

#include "twedge/ensembles.hpp"

namespace twedge {

struct ScalingFit {
  std::vector<int> sizes;
  std::vector<double> spreads;  ///< robust sd (IQR / 1.349) of lambda_1 per size
  std::vector<double> means;    ///< mean of lambda_1 per size
  std::vector<double> lambda_r; ///< edge location per size
  double slope = 0.0;           ///< least-squares slope of log spread on log N
  double r2 = 0.0;
};

struct RigidityConfig {
  SigmaModel sigma;
  EntryKind entries = EntryKind::gauss_real;
  std::vector<int> sizes{50, 100, 200, 400};  ///< values of N
  double d = 1.0;                             ///< M = round(N / d)
  int reps = 500;
  std::uint64_t seed = 0;
};

/// Throws InsufficientSizes with fewer than three sizes or a size below 50.
ScalingFit rigidity_scan(const RigidityConfig& config, int threads = 1);

/// Least-squares slope and r^2 of y on x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct DelocalizationResult {
  int m = 0;
  double max_statistic = 0.0;  ///< max over replicates of m * max_i |u_1i|^2
  double envelope = 0.0;       ///< max(1, (log m)^3)
  bool within_envelope = true;
  /// False when the population fails the edge regularity check or carries a
  /// spike at or above 1 + d^{-1/2}; u_1 then localizes and the bound is
  /// expected to fail.
  bool edge_regular = true;
};

struct DelocalizationConfig {
  SigmaModel sigma;
  EntryKind entries = EntryKind::gauss_real;
  int m = 200;
  double d = 1.0;  ///< N = round(d * m)
  int reps = 200;
  std::uint64_t seed = 0;
};

/// Diagonal sigma kinds only (identity, dc_diag, dr_spiked_diag, custom_atoms).
DelocalizationResult delocalization_scan(const DelocalizationConfig& config, int threads = 1);

/// m * max_i |u_i|^2 for a unit vector u of length m.
double sup_norm_statistic(const Eigen::VectorXcd& u);

/// | Tr (W - z)^{-1} - Tr (calW - z)^{-1} - (M - N)/z | divided by |(M - N)/z|
/// (absolute when M == N), for W = X^* X and calW = X X^* with a Gaussian X
/// drawn from `seed`. Requires Im z > 0 and m, n <= 200.
double trace_identity_check(int m, int n, std::complex<double> z, std::uint64_t seed);

}  // namespace twedge
