#include "twedge/spectral_core.hpp"

#include <cmath>
#include <sstream>

#include "twedge/errors.hpp"

namespace twedge {

namespace {

constexpr double kBisectionWidth = 1e-8;
constexpr double kPolishResidual = 1e-12;
constexpr double kAcceptResidual = 1e-10;

// Derivative of crucial_equation_lhs in c.
double crucial_equation_slope(const PopulationSpectrum& h, double c) {
  double s = 0.0;
  for (const auto& [lambda, w] : h.atoms()) {
    const double denom = 1.0 - lambda * c;
    const double ratio = lambda * c / denom;
    s += w * 2.0 * ratio * lambda / (denom * denom);
  }
  return s;
}

template <int Power>
double ratio_moment(const PopulationSpectrum& h, double c) {
  double s = 0.0;
  for (const auto& [lambda, w] : h.atoms()) {
    const double r = lambda * c / (1.0 - lambda * c);
    double p = 1.0;
    for (int i = 0; i < Power; ++i) p *= r;
    s += w * p;
  }
  return s;
}

}  // namespace

double crucial_equation_lhs(const PopulationSpectrum& h, double c) {
  return ratio_moment<2>(h, c);
}

double solve_c(const PopulationSpectrum& h, double d_n) {
  if (!(d_n > 0.0)) throw InvalidModel("dimension ratio d_n must be positive");
  const double lmax = h.lambda_max();
  double lo = 0.0;
  const double upper = (1.0 - 1e-9) / lmax;
  double hi = upper;
  if (crucial_equation_lhs(h, hi) < d_n)
    throw NonConvergence("root of the edge equation lies within 1e-9 of 1/lambda_max");

  while (hi - lo > kBisectionWidth * upper) {
    const double mid = 0.5 * (lo + hi);
    if (crucial_equation_lhs(h, mid) < d_n)
      lo = mid;
    else
      hi = mid;
  }

  // The left side is increasing and convex, so Newton from the upper end of
  // the bracket approaches the root monotonically.
  double c = hi;
  double residual = crucial_equation_lhs(h, c) - d_n;
  for (int it = 0; it < 100 && std::abs(residual) > kPolishResidual; ++it) {
    const double slope = crucial_equation_slope(h, c);
    double next = c - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double r_next = crucial_equation_lhs(h, next) - d_n;
    if (r_next < 0.0)
      lo = next;
    else
      hi = next;
    if (next == c) break;
    c = next;
    residual = r_next;
  }
  if (!(std::abs(residual) <= kAcceptResidual)) {
    std::ostringstream os;
    os << "solve_c: residual " << residual << " above " << kAcceptResidual;
    throw NonConvergence(os.str());
  }
  return c;
}

double compute_lambda_r(double c, const PopulationSpectrum& h, double d_n) {
  return (1.0 + ratio_moment<1>(h, c) / d_n) / c;
}

double compute_sigma(double c, const PopulationSpectrum& h, double d_n) {
  const double sigma3 = (1.0 + ratio_moment<3>(h, c) / d_n) / (c * c * c);
  return std::cbrt(sigma3);
}

EdgeParams edge_params(const PopulationSpectrum& h, double d_n, const EdgeOptions& options) {
  EdgeParams ep;
  ep.d_n = d_n;
  ep.c = solve_c(h, d_n);
  ep.lambda_r = compute_lambda_r(ep.c, h, d_n);
  ep.sigma = compute_sigma(ep.c, h, d_n);
  ep.regularity_margin = 1.0 - h.lambda_max() * ep.c;

  const double threshold = std::max(options.margin_threshold, kHardMarginFloor);
  if (ep.regularity_margin < threshold) {
    std::ostringstream os;
    os << "edge regularity margin 1 - lambda_max*c = " << ep.regularity_margin
       << " is below the threshold " << threshold;
    throw EdgeConditionViolated(os.str(), ep.regularity_margin);
  }
  ep.margin_warning = ep.regularity_margin < kDefaultMarginThreshold;
  return ep;
}

bool subcritical_check(double spike, double d) {
  return spike < 1.0 + 1.0 / std::sqrt(d);
}

cplx companion_transform(cplx m, cplx z, double d_n) {
  return d_n * m + (d_n - 1.0) / z;
}

cplx inverse_companion_transform(cplx mu, cplx z, double d_n) {
  return mu / d_n - (1.0 - 1.0 / d_n) / z;
}

double normalize_top_eigenvalue(double lambda1, const EdgeParams& ep, int n) {
  return std::pow(static_cast<double>(n), 2.0 / 3.0) * (lambda1 - ep.lambda_r) / ep.sigma;
}

}  // namespace twedge
