#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twedge/errors.hpp"
#include "twedge/spectral_core.hpp"

namespace twedge {

namespace {

constexpr double kStageTolerance = 1e-9;
constexpr double kDensityEta = 1e-5;

// integral t / (t m + 1) dH(t) and its derivative in m.
struct Moment {
  cplx value;
  cplx slope;
};

Moment population_moment(cplx m, const PopulationSpectrum& h) {
  Moment out{0.0, 0.0};
  for (const auto& [t, w] : h.atoms()) {
    const cplx inv = 1.0 / (t * m + 1.0);
    out.value += w * t * inv;
    out.slope -= w * t * t * inv * inv;
  }
  return out;
}

// Inverse form of the self-consistent equation: g(m) = 0 with
// g(m) = -1/m + d^{-1} * integral t/(t m + 1) dH - z.
struct Inverse {
  cplx g;
  cplx dg;
};

Inverse inverse_form(cplx m, cplx z, const PopulationSpectrum& h, double d_n) {
  const Moment mom = population_moment(m, h);
  return {-1.0 / m + mom.value / d_n - z, 1.0 / (m * m) + mom.slope / d_n};
}

// Damped Newton on g from `m`, staying in the upper half-plane, with |g| as
// the merit function. Returns false if the residual cannot be brought to `tol`.
bool newton_stage(cplx z, const PopulationSpectrum& h, double d_n, double tol,
                  const StieltjesOptions& opt, cplx& m) {
  Inverse f = inverse_form(m, z, h, d_n);
  for (int step = 0; step < opt.max_newton_steps; ++step) {
    if (self_consistent_residual(m, z, h, d_n) <= tol) return true;
    const cplx delta = f.g / f.dg;
    if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) return false;

    double damping = 1.0;
    bool accepted = false;
    for (int k = 0; k <= opt.max_halvings; ++k, damping *= 0.5) {
      const cplx trial = m - damping * delta;
      if (!(trial.imag() > 0.0)) continue;
      const Inverse ft = inverse_form(trial, z, h, d_n);
      if (std::abs(ft.g) < std::abs(f.g)) {
        m = trial;
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return self_consistent_residual(m, z, h, d_n) <= tol;
}

}  // namespace

double self_consistent_residual(cplx m, cplx z, const PopulationSpectrum& h, double d_n) {
  const Moment mom = population_moment(m, h);
  return std::abs(m - 1.0 / (-z + mom.value / d_n));
}

StieltjesValue solve_m0(cplx z, const PopulationSpectrum& h, double d_n,
                        const StieltjesOptions& options) {
  if (!(z.imag() > 0.0)) throw InvalidModel("solve_m0 requires Im z > 0");
  if (!(d_n > 0.0)) throw InvalidModel("dimension ratio d_n must be positive");

  const double target_eta = z.imag();
  // Start far enough out that -1/z is already close to m0.
  const double scale = std::abs(z.real()) + h.lambda_max() * (1.0 + 1.0 / d_n);
  double eta = std::max({1.0, target_eta, 4.0 * scale});
  cplx zs(z.real(), eta);
  cplx m = -1.0 / zs;

  while (true) {
    const bool last = eta <= target_eta;
    const double tol = last ? options.tol : std::max(options.tol, kStageTolerance);
    if (!newton_stage(zs, h, d_n, tol, options, m)) {
      std::ostringstream os;
      os << "solve_m0: Newton stalled at z = " << zs.real() << " + " << zs.imag()
         << "i (residual " << self_consistent_residual(m, zs, h, d_n) << ")";
      throw NonConvergence(os.str());
    }
    if (last) break;
    eta = std::max(target_eta, eta * options.homotopy_ratio);
    zs = cplx(z.real(), eta);
  }
  return {z, m, self_consistent_residual(m, z, h, d_n)};
}

std::vector<double> density_rho0(std::span<const double> e_grid, const PopulationSpectrum& h,
                                 double d_n) {
  const double lambda_r = compute_lambda_r(solve_c(h, d_n), h, d_n);
  std::vector<double> out;
  out.reserve(e_grid.size());
  for (double e : e_grid) {
    if (e <= 0.0 || e > lambda_r) {
      out.push_back(0.0);
      continue;
    }
    const double near = solve_m0(cplx(e, kDensityEta), h, d_n).m0.imag();
    const double far = solve_m0(cplx(e, 2.0 * kDensityEta), h, d_n).m0.imag();
    out.push_back(std::max(0.0, (2.0 * near - far) / std::numbers::pi));
  }
  return out;
}

}  // namespace twedge
