#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "twedge/population_spectrum.hpp"
#include "twedge/rng.hpp"

namespace twedge {

enum class EntryKind {
  gauss_real,
  gauss_complex_standard,
  discrete_u_real,
  discrete_u_complex,
  pareto_real,
  pareto_complex,
};

bool is_complex(EntryKind kind);
std::string_view to_string(EntryKind kind);
/// Throws ConfigError on an unknown name.
EntryKind parse_entry_kind(std::string_view name);

/// Atoms and weights of the five-point law whose first four moments agree
/// with N(0, 1).
inline constexpr double kDiscreteAtoms[5] = {-2.0, -1.0, 0.0, 1.5, 4.0};
inline constexpr double kDiscreteWeights[5] = {1.0 / 12, 4.0 / 25, 13.0 / 24, 16.0 / 75,
                                               1.0 / 600};

/// Lower cutoff sqrt(3/5) of the symmetric Pareto law with density
/// (9/10) sqrt(3/5) |x|^{-6} on |x| > sqrt(3/5).
double pareto_cutoff();

/// One unscaled (unit variance) real draw of the given real kind, or of the
/// real part building block of a complex kind.
double draw_real_unit(EntryKind kind, Rng& rng);
/// One unscaled draw; real kinds return a zero imaginary part.
std::complex<double> draw_unit(EntryKind kind, Rng& rng);

using EntryMatrix = std::variant<Eigen::MatrixXd, Eigen::MatrixXcd>;

/// m x n matrix of independent entries of the given law scaled by 1/sqrt(n),
/// filled column by column from a generator seeded with `seed`.
EntryMatrix sample_entries(EntryKind kind, int m, int n, std::uint64_t seed);

/// Fills `out` (already sized) with unscaled draws, column-major.
void fill_entries(EntryKind kind, Rng& rng, Eigen::MatrixXd& out);
void fill_entries(EntryKind kind, Rng& rng, Eigen::MatrixXcd& out);

enum class SigmaKind { identity, dc_diag, dc_rotated, dr_spiked_diag, dr_rotated, custom_atoms };

std::string_view to_string(SigmaKind kind);
SigmaKind parse_sigma_kind(std::string_view name);

struct SigmaModel {
  SigmaKind kind = SigmaKind::identity;
  /// Top eigenvalue for the dr kinds; defaults to 1 + d_n^{-1/2} / 2.
  std::optional<double> spike;
  /// Population law for custom_atoms. Multiplicities are floor(weight * m),
  /// with the remainder given to the largest atoms.
  std::optional<PopulationSpectrum> atoms;
  std::uint64_t rotation_seed = 0;
};

/// Sigma together with its square root and its exact spectrum.
struct PopulationModel {
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd sigma_sqrt;
  bool diagonal = true;
  PopulationSpectrum spectrum;
};

/// Orthogonal polar factor G (G^T G)^{-1/2} of an m x m standard Gaussian
/// matrix drawn from `seed`; Haar distributed on O(m).
Eigen::MatrixXd haar_orthogonal(int m, std::uint64_t seed);

/// Builds Sigma for the given model at dimension m (m >= 3 for the structured
/// kinds). Throws InvalidModel for a nonpositive spike or missing atoms.
PopulationModel build_sigma(const SigmaModel& model, int m, double d_n);

/// Wraps an arbitrary symmetric positive-definite matrix.
PopulationModel population_from_matrix(const Eigen::MatrixXd& sigma);

struct SampleDraw {
  std::vector<double> top_eigenvalues;  ///< descending
  std::optional<Eigen::VectorXcd> top_eigenvector;
  int m_dim = 0;
  int n_dim = 0;
  std::uint64_t seed = 0;
};

inline constexpr int kDefaultEigenvectorCap = 2000;

struct DrawOptions {
  int eigenvector_cap = kDefaultEigenvectorCap;
};

/// Top-k eigenvalues (and optionally u_1) of Sigma^{1/2} X X^* Sigma^{1/2}
/// for X drawn by sample_entries(kind, m, n, seed). The smaller of the two
/// Gram matrices is diagonalized. Throws EigenFailure.
SampleDraw draw_sample(const PopulationModel& pop, EntryKind kind, int m, int n, int k,
                       std::uint64_t seed, bool want_vector = false,
                       const DrawOptions& options = {});

/// Top-k eigenvalues (descending) of Y Y^*, using Y^* Y when Y is tall.
/// When `vector` is non-null it receives the unit top eigenvector of Y Y^*.
std::vector<double> top_eigen_gram(const Eigen::MatrixXd& y, int k,
                                   Eigen::VectorXcd* vector = nullptr);
std::vector<double> top_eigen_gram(const Eigen::MatrixXcd& y, int k,
                                   Eigen::VectorXcd* vector = nullptr);

/// Sigma^{1/2} X for a drawn entry matrix.
Eigen::MatrixXd apply_sigma_sqrt(const PopulationModel& pop, const Eigen::MatrixXd& x);
Eigen::MatrixXcd apply_sigma_sqrt(const PopulationModel& pop, const Eigen::MatrixXcd& x);

// Gaussian (GOE / GUE) ensembles ------------------------------------------

enum class GaussianMethod { tridiagonal, dense };

/// Dense GOE (beta 1) or GUE (beta 2) with unit off-diagonal variance; the
/// GOE diagonal has variance 2, the GUE diagonal variance 1. The spectral
/// edge sits at 2 sqrt(dim).
Eigen::MatrixXd dense_goe(int dim, Rng& rng);
Eigen::MatrixXcd dense_gue(int dim, Rng& rng);

/// Top three eigenvalues, descending, of a given symmetric matrix.
std::vector<double> top3_symmetric(const Eigen::MatrixXd& a);

/// Top-k eigenvalues of a GOE/GUE draw. The tridiagonal method samples the
/// Dumitriu-Edelman tridiagonal model, which has exactly the same joint
/// eigenvalue law as the dense ensemble at O(dim^2) cost.
std::vector<double> draw_gaussian_ensemble_top(int beta, int dim, int k, std::uint64_t seed,
                                               GaussianMethod method = GaussianMethod::tridiagonal);

inline std::vector<double> draw_goe_top3(int dim, std::uint64_t seed, int beta = 1,
                                         GaussianMethod method = GaussianMethod::tridiagonal) {
  return draw_gaussian_ensemble_top(beta, dim, 3, seed, method);
}

}  // namespace twedge
