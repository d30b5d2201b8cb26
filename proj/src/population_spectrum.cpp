#include "twedge/population_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twedge/errors.hpp"

namespace twedge {

namespace {

// Atoms closer than this (relative) are treated as the same eigenvalue.
constexpr double kMergeTolerance = 1e-12;

}  // namespace

PopulationSpectrum::PopulationSpectrum(std::vector<Atom> atoms, int m_dim)
    : m_dim_(m_dim) {
  if (atoms.empty()) throw InvalidModel("population spectrum has no atoms");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!(a.value > 0.0) || !std::isfinite(a.value))
      throw InvalidModel("population eigenvalue must be positive and finite, got " +
                         std::to_string(a.value));
    if (!(a.weight > 0.0) || a.weight > 1.0)
      throw InvalidModel("atom weight must lie in (0, 1], got " + std::to_string(a.weight));
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidModel("atom weights sum to " + std::to_string(total) + ", expected 1");

  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value > b.value; });
  for (const auto& a : atoms) {
    if (!atoms_.empty() &&
        std::abs(atoms_.back().value - a.value) <= kMergeTolerance * atoms_.back().value) {
      atoms_.back().weight += a.weight;
    } else {
      atoms_.push_back(a);
    }
  }
}

PopulationSpectrum PopulationSpectrum::point_mass(double value) {
  return PopulationSpectrum({{value, 1.0}});
}

PopulationSpectrum PopulationSpectrum::from_eigenvalues(std::span<const double> eigenvalues) {
  std::vector<Atom> atoms;
  atoms.reserve(eigenvalues.size());
  const double w = 1.0 / static_cast<double>(eigenvalues.size());
  for (double v : eigenvalues) atoms.push_back({v, w});
  // Summing many 1/M weights can drift by a few ulps; renormalize exactly.
  double total = 0.0;
  for (const auto& a : atoms) total += a.weight;
  for (auto& a : atoms) a.weight /= total;
  return PopulationSpectrum(std::move(atoms), static_cast<int>(eigenvalues.size()));
}

PopulationSpectrum PopulationSpectrum::scaled(double alpha) const {
  if (!(alpha > 0.0)) throw InvalidModel("scale factor must be positive");
  std::vector<Atom> out = atoms_;
  for (auto& a : out) a.value *= alpha;
  return PopulationSpectrum(std::move(out), m_dim_);
}

}  // namespace twedge
