#pragma once

#include <span>
#include <vector>

namespace twedge {

struct Atom {
  double value;
  double weight;
};

/// Finite atoms-and-weights law of the population eigenvalues (the ESD of
/// Sigma). Atoms are positive, merged when repeated, and kept in descending
/// order of value. Weights sum to one.
class PopulationSpectrum {
 public:
  /// Throws InvalidModel on nonpositive values, weights outside (0, 1], or a
  /// total weight that differs from one by more than 1e-12.
  explicit PopulationSpectrum(std::vector<Atom> atoms, int m_dim = 0);

  static PopulationSpectrum point_mass(double value);
  /// Uniform law over the given eigenvalues; m_dim is their count.
  static PopulationSpectrum from_eigenvalues(std::span<const double> eigenvalues);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double lambda_max() const noexcept { return atoms_.front().value; }
  double lambda_min() const noexcept { return atoms_.back().value; }
  int m_dim() const noexcept { return m_dim_; }

  /// Law of alpha * lambda.
  PopulationSpectrum scaled(double alpha) const;

 private:
  std::vector<Atom> atoms_;
  int m_dim_ = 0;
};

}  // namespace twedge
