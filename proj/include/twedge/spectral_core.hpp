#pragma once

// Deterministic edge numerics of the limiting spectral law of
// Sigma^{1/2} X X^* Sigma^{1/2}: the parameter c, the right edge lambda_r,
// the Tracy-Widom scale sigma, the Stieltjes transform m0 and its density.

#include <complex>
#include <span>
#include <vector>

#include "twedge/population_spectrum.hpp"

namespace twedge {

using cplx = std::complex<double>;

struct EdgeParams {
  double c = 0.0;
  double lambda_r = 0.0;
  double sigma = 0.0;
  double d_n = 0.0;
  /// 1 - lambda_max * c.
  double regularity_margin = 0.0;
  /// Set when the caller lowered the threshold and the margin sits in the
  /// band between that threshold and kDefaultMarginThreshold.
  bool margin_warning = false;
};

inline constexpr double kDefaultMarginThreshold = 0.05;
/// Margins below this are always rejected, whatever the caller asks for.
inline constexpr double kHardMarginFloor = 1e-3;

struct EdgeOptions {
  double margin_threshold = kDefaultMarginThreshold;
};

/// Left side of the defining equation for c: integral of (lc/(1-lc))^2 dH.
double crucial_equation_lhs(const PopulationSpectrum& h, double c);

/// Unique root c in [0, 1/lambda_max) of crucial_equation_lhs(h, c) = d_n.
/// Bracketed bisection followed by a Newton polish; throws NonConvergence if
/// the absolute residual stays above 1e-10.
double solve_c(const PopulationSpectrum& h, double d_n);

double compute_lambda_r(double c, const PopulationSpectrum& h, double d_n);
double compute_sigma(double c, const PopulationSpectrum& h, double d_n);

/// Bundles solve_c, compute_lambda_r and compute_sigma. Throws
/// EdgeConditionViolated when the regularity margin is below
/// max(options.margin_threshold, kHardMarginFloor).
EdgeParams edge_params(const PopulationSpectrum& h, double d_n,
                       const EdgeOptions& options = {});

/// True iff spike < 1 + d^{-1/2}.
bool subcritical_check(double spike, double d);

struct StieltjesValue {
  cplx z;
  cplx m0;
  double residual = 0.0;
};

struct StieltjesOptions {
  double tol = 1e-12;
  /// Geometric factor applied to Im z between homotopy stages.
  double homotopy_ratio = 0.5;
  int max_newton_steps = 200;
  int max_halvings = 60;
};

/// |m - 1/(-z + d_n^{-1} * integral t/(t m + 1) dH(t))|.
double self_consistent_residual(cplx m, cplx z, const PopulationSpectrum& h,
                                double d_n);

/// Solves the self-consistent equation for m0(z), Im z > 0, by damped Newton
/// continued in Im z from 1 (or Im z itself if larger) down to the target.
/// Throws NonConvergence when a stage cannot be driven below tolerance.
StieltjesValue solve_m0(cplx z, const PopulationSpectrum& h, double d_n,
                        const StieltjesOptions& options = {});

inline StieltjesValue solve_m0(cplx z, const PopulationSpectrum& h, double d_n,
                               double tol) {
  StieltjesOptions o;
  o.tol = tol;
  return solve_m0(z, h, d_n, o);
}

/// rho0(E) = Im m0(E + i0) / pi, obtained by linear Richardson extrapolation
/// from eta = 1e-5 and 2e-5. Zero outside (0, lambda_r].
std::vector<double> density_rho0(std::span<const double> e_grid,
                                 const PopulationSpectrum& h, double d_n);

/// Maps the transform of the N x N law to the transform of the M x M law:
/// returns mu with m = mu / d_n - (1 - 1/d_n) / z.
cplx companion_transform(cplx m, cplx z, double d_n);
/// Inverse of companion_transform.
cplx inverse_companion_transform(cplx mu, cplx z, double d_n);

/// n^{2/3} (lambda1 - lambda_r) / sigma.
double normalize_top_eigenvalue(double lambda1, const EdgeParams& ep, int n);

}  // namespace twedge
