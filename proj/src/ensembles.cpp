#include "twedge/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twedge/errors.hpp"

namespace twedge {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Holds the distribution objects for one fill so that cached state (the
// second normal of each Box-Muller pair) is reused across entries.
class EntrySampler {
 public:
  explicit EntrySampler(EntryKind kind)
      : kind_(kind),
        discrete_(std::begin(kDiscreteWeights), std::end(kDiscreteWeights)) {}

  double real(Rng& rng) {
    switch (kind_) {
      case EntryKind::gauss_real:
      case EntryKind::gauss_complex_standard:
        return normal_(rng);
      case EntryKind::discrete_u_real:
      case EntryKind::discrete_u_complex:
        return kDiscreteAtoms[discrete_(rng)];
      case EntryKind::pareto_real:
      case EntryKind::pareto_complex: {
        // P(|x| > t) = (a / t)^5 for t > a.
        const double u = 1.0 - uniform_(rng);  // (0, 1]
        const double magnitude = pareto_cutoff() * std::pow(u, -0.2);
        return uniform_(rng) < 0.5 ? -magnitude : magnitude;
      }
    }
    return 0.0;
  }

  std::complex<double> value(Rng& rng) {
    if (!is_complex(kind_)) return {real(rng), 0.0};
    const double re = real(rng);
    const double im = real(rng);
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

 private:
  EntryKind kind_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::discrete_distribution<int> discrete_;
};

template <class Matrix>
std::vector<double> top_eigen_gram_impl(const Matrix& y, int k, Eigen::VectorXcd* vector) {
  const Eigen::Index m = y.rows();
  const Eigen::Index n = y.cols();
  const bool use_outer = m <= n;
  const Matrix gram = use_outer ? Matrix(y * y.adjoint()) : Matrix(y.adjoint() * y);
  const Eigen::Index dim = gram.rows();
  if (k > dim) throw InvalidModel("requested more eigenvalues than min(m, n)");

  const auto mode = vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, mode);
  if (solver.info() != Eigen::Success) throw EigenFailure("self-adjoint eigensolver did not converge");

  const auto& vals = solver.eigenvalues();
  std::vector<double> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(vals(dim - 1 - i));

  if (vector) {
    Eigen::VectorXcd v = solver.eigenvectors().col(dim - 1).template cast<std::complex<double>>();
    if (!use_outer) {
      // u = Y v / |Y v| shares the eigenvalue of v.
      const Eigen::MatrixXcd yc = y.template cast<std::complex<double>>();
      v = yc * v;
    }
    *vector = v / v.norm();
  }
  return out;
}

template <class Matrix>
Matrix apply_sigma_sqrt_impl(const PopulationModel& pop, const Matrix& x) {
  if (pop.diagonal) return pop.sigma_sqrt.diagonal().asDiagonal() * x;
  return pop.sigma_sqrt * x;
}

}  // namespace

bool is_complex(EntryKind kind) {
  return kind == EntryKind::gauss_complex_standard || kind == EntryKind::discrete_u_complex ||
         kind == EntryKind::pareto_complex;
}

std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::gauss_real: return "gauss_real";
    case EntryKind::gauss_complex_standard: return "gauss_complex_standard";
    case EntryKind::discrete_u_real: return "discrete_u_real";
    case EntryKind::discrete_u_complex: return "discrete_u_complex";
    case EntryKind::pareto_real: return "pareto_real";
    case EntryKind::pareto_complex: return "pareto_complex";
  }
  return "?";
}

EntryKind parse_entry_kind(std::string_view name) {
  for (auto k : {EntryKind::gauss_real, EntryKind::gauss_complex_standard,
                 EntryKind::discrete_u_real, EntryKind::discrete_u_complex,
                 EntryKind::pareto_real, EntryKind::pareto_complex}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown entry distribution '" + std::string(name) + "'");
}

double pareto_cutoff() { return std::sqrt(3.0 / 5.0); }

double draw_real_unit(EntryKind kind, Rng& rng) { return EntrySampler(kind).real(rng); }

std::complex<double> draw_unit(EntryKind kind, Rng& rng) { return EntrySampler(kind).value(rng); }

void fill_entries(EntryKind kind, Rng& rng, Eigen::MatrixXd& out) {
  if (is_complex(kind)) throw InvalidModel("complex entry law requested for a real matrix");
  EntrySampler sampler(kind);
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = sampler.real(rng);
}

void fill_entries(EntryKind kind, Rng& rng, Eigen::MatrixXcd& out) {
  EntrySampler sampler(kind);
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = sampler.value(rng);
}

EntryMatrix sample_entries(EntryKind kind, int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidModel("matrix dimensions must be positive");
  Rng rng = make_rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  if (is_complex(kind)) {
    Eigen::MatrixXcd x(m, n);
    fill_entries(kind, rng, x);
    x *= scale;
    return x;
  }
  Eigen::MatrixXd x(m, n);
  fill_entries(kind, rng, x);
  x *= scale;
  return x;
}

std::string_view to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::identity: return "identity";
    case SigmaKind::dc_diag: return "dc_diag";
    case SigmaKind::dc_rotated: return "dc_rotated";
    case SigmaKind::dr_spiked_diag: return "dr_spiked_diag";
    case SigmaKind::dr_rotated: return "dr_rotated";
    case SigmaKind::custom_atoms: return "custom_atoms";
  }
  return "?";
}

SigmaKind parse_sigma_kind(std::string_view name) {
  for (auto k : {SigmaKind::identity, SigmaKind::dc_diag, SigmaKind::dc_rotated,
                 SigmaKind::dr_spiked_diag, SigmaKind::dr_rotated, SigmaKind::custom_atoms}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown sigma model '" + std::string(name) + "'");
}

Eigen::MatrixXd haar_orthogonal(int m, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) g(i, j) = normal(rng);
  // G (G^T G)^{-1/2} equals the polar factor U V^T of the SVD G = U S V^T;
  // the SVD route keeps orthogonality at machine precision.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

PopulationModel build_sigma(const SigmaModel& model, int m, double d_n) {
  if (m < 1) throw InvalidModel("dimension m must be positive");
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(m);
  bool rotated = false;

  switch (model.kind) {
    case SigmaKind::identity:
      break;
    case SigmaKind::dc_rotated:
      rotated = true;
      [[fallthrough]];
    case SigmaKind::dc_diag:
      if (m < 3) throw InvalidModel("structured sigma models need m >= 3");
      for (int i = m / 2; i < m; ++i) diag(i) = 2.0;
      break;
    case SigmaKind::dr_rotated:
      rotated = true;
      [[fallthrough]];
    case SigmaKind::dr_spiked_diag: {
      if (m < 3) throw InvalidModel("structured sigma models need m >= 3");
      if (!(d_n > 0.0)) throw InvalidModel("dimension ratio d_n must be positive");
      const double spike = model.spike.value_or(1.0 + 0.5 / std::sqrt(d_n));
      if (!(spike > 0.0)) throw InvalidModel("spike must be positive");
      diag(0) = spike;
      break;
    }
    case SigmaKind::custom_atoms: {
      if (!model.atoms) throw InvalidModel("custom_atoms model needs atoms");
      const auto& atoms = model.atoms->atoms();
      std::vector<int> count(atoms.size());
      int used = 0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        count[i] = static_cast<int>(std::floor(atoms[i].weight * m + 1e-9));
        used += count[i];
      }
      for (std::size_t i = 0; used < m; i = (i + 1) % atoms.size(), ++used) ++count[i];
      int pos = 0;
      for (std::size_t i = 0; i < atoms.size(); ++i)
        for (int r = 0; r < count[i] && pos < m; ++r) diag(pos++) = atoms[i].value;
      break;
    }
  }

  std::vector<double> eig(diag.data(), diag.data() + m);
  PopulationModel pop{Eigen::MatrixXd(), Eigen::MatrixXd(), !rotated,
                      PopulationSpectrum::from_eigenvalues(eig)};
  const Eigen::VectorXd root = diag.cwiseSqrt();
  if (rotated) {
    const Eigen::MatrixXd u = haar_orthogonal(m, model.rotation_seed);
    pop.sigma = u * diag.asDiagonal() * u.transpose();
    pop.sigma_sqrt = u * root.asDiagonal() * u.transpose();
  } else {
    pop.sigma = diag.asDiagonal();
    pop.sigma_sqrt = root.asDiagonal();
  }
  return pop;
}

PopulationModel population_from_matrix(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw InvalidModel("sigma must be a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  if (solver.info() != Eigen::Success) throw EigenFailure("eigendecomposition of sigma failed");
  const Eigen::VectorXd vals = solver.eigenvalues();
  if (!(vals.minCoeff() > 0.0)) throw InvalidModel("sigma must be positive definite");
  const bool diagonal = sigma.isDiagonal(0.0);
  std::vector<double> eig(vals.data(), vals.data() + vals.size());
  PopulationModel pop{sigma, Eigen::MatrixXd(), diagonal, PopulationSpectrum::from_eigenvalues(eig)};
  if (diagonal) {
    pop.sigma_sqrt = sigma.diagonal().cwiseSqrt().asDiagonal();
  } else {
    pop.sigma_sqrt = solver.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
                     solver.eigenvectors().transpose();
  }
  return pop;
}

Eigen::MatrixXd apply_sigma_sqrt(const PopulationModel& pop, const Eigen::MatrixXd& x) {
  return apply_sigma_sqrt_impl(pop, x);
}

Eigen::MatrixXcd apply_sigma_sqrt(const PopulationModel& pop, const Eigen::MatrixXcd& x) {
  if (pop.diagonal) return pop.sigma_sqrt.diagonal().asDiagonal() * x;
  return pop.sigma_sqrt.cast<std::complex<double>>() * x;
}

std::vector<double> top_eigen_gram(const Eigen::MatrixXd& y, int k, Eigen::VectorXcd* vector) {
  return top_eigen_gram_impl(y, k, vector);
}

std::vector<double> top_eigen_gram(const Eigen::MatrixXcd& y, int k, Eigen::VectorXcd* vector) {
  return top_eigen_gram_impl(y, k, vector);
}

SampleDraw draw_sample(const PopulationModel& pop, EntryKind kind, int m, int n, int k,
                       std::uint64_t seed, bool want_vector, const DrawOptions& options) {
  if (pop.sigma.rows() != m) throw InvalidModel("sigma dimension does not match m");
  if (k < 1 || k > std::min(m, n)) throw InvalidModel("k must lie in [1, min(m, n)]");
  if (want_vector && m > options.eigenvector_cap)
    throw InvalidModel("eigenvector requested above the configured dimension cap");

  SampleDraw draw;
  draw.m_dim = m;
  draw.n_dim = n;
  draw.seed = seed;
  Eigen::VectorXcd vec;
  Eigen::VectorXcd* vec_ptr = want_vector ? &vec : nullptr;

  std::visit(
      [&](const auto& x) { draw.top_eigenvalues = top_eigen_gram(apply_sigma_sqrt(pop, x), k, vec_ptr); },
      sample_entries(kind, m, n, seed));
  if (want_vector) draw.top_eigenvector = std::move(vec);
  return draw;
}

}  // namespace twedge
