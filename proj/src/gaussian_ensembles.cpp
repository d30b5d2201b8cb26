#include <cmath>
#include <numbers>

#include "twedge/ensembles.hpp"
#include "twedge/errors.hpp"

namespace twedge {

namespace {

std::vector<double> top_k_descending(const Eigen::VectorXd& ascending, int k) {
  const Eigen::Index n = ascending.size();
  std::vector<double> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(ascending(n - 1 - i));
  return out;
}

// Tridiagonal model with off-diagonal chi_{beta (dim-k)} entries,
// scaled so that beta = 1 matches dense_goe and beta = 2 matches dense_gue.
std::vector<double> tridiagonal_top(int beta, int dim, int k, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd diag(dim);
  Eigen::VectorXd sub(dim - 1);
  const double diag_scale = beta == 1 ? std::numbers::sqrt2 : 1.0;
  const double off_scale = beta == 1 ? 1.0 : 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < dim; ++i) diag(i) = diag_scale * normal(rng);
  for (int i = 0; i < dim - 1; ++i) {
    std::chi_squared_distribution<double> chi2(static_cast<double>(beta * (dim - 1 - i)));
    sub(i) = off_scale * std::sqrt(chi2(rng));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigenFailure("tridiagonal eigensolver did not converge");
  return top_k_descending(solver.eigenvalues(), k);
}

}  // namespace

Eigen::MatrixXd dense_goe(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int j = 0; j < dim; ++j) {
    a(j, j) = std::numbers::sqrt2 * normal(rng);
    for (int i = j + 1; i < dim; ++i) a(i, j) = a(j, i) = normal(rng);
  }
  return a;
}

Eigen::MatrixXcd dense_gue(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXcd a(dim, dim);
  for (int j = 0; j < dim; ++j) {
    a(j, j) = normal(rng);
    for (int i = j + 1; i < dim; ++i) {
      const std::complex<double> v(s * normal(rng), s * normal(rng));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  return a;
}

std::vector<double> top3_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() < 3 || a.rows() != a.cols()) throw InvalidModel("need a square matrix of size >= 3");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigenFailure("self-adjoint eigensolver did not converge");
  return top_k_descending(solver.eigenvalues(), 3);
}

std::vector<double> draw_gaussian_ensemble_top(int beta, int dim, int k, std::uint64_t seed,
                                               GaussianMethod method) {
  if (beta != 1 && beta != 2) throw InvalidModel("beta must be 1 or 2");
  if (dim < k || k < 1) throw InvalidModel("ensemble dimension must be at least k");
  Rng rng = make_rng(seed);
  if (method == GaussianMethod::tridiagonal) return tridiagonal_top(beta, dim, k, rng);

  Eigen::VectorXd vals;
  if (beta == 1) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_goe(dim, rng), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigenFailure("GOE eigensolver did not converge");
    vals = solver.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_gue(dim, rng), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigenFailure("GUE eigensolver did not converge");
    vals = solver.eigenvalues();
  }
  return top_k_descending(vals, k);
}

}  // namespace twedge
