#include "qcompat/state_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcompat {

namespace {

std::string fmt_value(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch("matrix must be square and nonempty, got " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  }
}

}  // namespace

HermitianEigen hermitian_eigen(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const int n = static_cast<int>(h.rows());
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen sorts ascending.
  for (int i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

PositiveOperator::PositiveOperator(Matrix m, RealVector values, Matrix vectors, double eps_rank)
    : matrix_(std::move(m)),
      eigenvalues_(std::move(values)),
      eigenvectors_(std::move(vectors)),
      eps_rank_(eps_rank) {
  const double cut = rank_threshold();
  rank_ = static_cast<int>((eigenvalues_.array() > cut).count());
}

double PositiveOperator::rank_threshold() const {
  return eigenvalues_.size() == 0 ? 0.0 : eps_rank_ * eigenvalues_(0);
}

DensityOperator validate_density(const Matrix& matrix, double eps_rank) {
  require_square(matrix);
  const double defect = hermiticity_defect(matrix);
  if (defect > kHermitianTol) {
    throw NotHermitian("matrix is not Hermitian (max |M - M^dagger| = " + fmt_value(defect) + ")");
  }
  Matrix h = hermitian_part(matrix);
  HermitianEigen eig = hermitian_eigen(h);
  const double min_eig = eig.values.minCoeff();
  if (min_eig < -kPsdTol) {
    throw NotPSD("matrix has negative eigenvalue " + fmt_value(min_eig));
  }
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    throw TraceNotOne("trace is " + std::to_string(trace) + ", expected 1");
  }
  eig.values = eig.values.cwiseMax(0.0);
  return DensityOperator(std::move(h), std::move(eig.values), std::move(eig.vectors), eps_rank);
}

Effect validate_effect(const Matrix& matrix, double eps_rank) {
  require_square(matrix);
  const double defect = hermiticity_defect(matrix);
  if (defect > kHermitianTol) {
    throw NotHermitian("matrix is not Hermitian (max |M - M^dagger| = " + fmt_value(defect) + ")");
  }
  Matrix h = hermitian_part(matrix);
  HermitianEigen eig = hermitian_eigen(h);
  if (eig.values.minCoeff() < -kPsdTol) {
    throw NotPSD("effect has negative eigenvalue " + fmt_value(eig.values.minCoeff()));
  }
  if (eig.values.maxCoeff() > 1.0 + kPsdTol) {
    throw NotAnEffect("effect has eigenvalue " + fmt_value(eig.values.maxCoeff()) + " above 1");
  }
  eig.values = eig.values.cwiseMax(0.0).cwiseMin(1.0);
  return Effect(std::move(h), std::move(eig.values), std::move(eig.vectors), eps_rank);
}

PureState::PureState(Vector v) : vector_(std::move(v)) {
  if (vector_.size() == 0) throw DimensionMismatch("pure state needs a nonempty vector");
  const double norm = vector_.norm();
  if (std::abs(norm - 1.0) > kUnitTol) {
    throw NotUnitVector("vector norm is " + std::to_string(norm) + ", expected 1");
  }
  projection_ = vector_ * vector_.adjoint();
}

PureState PureState::normalized(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 1e-300) || !std::isfinite(norm)) {
    throw NotUnitVector("cannot normalize a zero or non-finite vector");
  }
  return PureState(v / norm);
}

DensityOperator to_density(const PureState& p, double eps_rank) {
  return validate_density(p.projection(), eps_rank);
}

namespace {

template <typename F>
Matrix spectral_map(const PositiveOperator& a, F&& f) {
  const double cut = a.rank_threshold();
  const Matrix& v = a.eigenvectors();
  RealVector mapped(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    const double t = a.eigenvalues()(i);
    mapped(i) = t > cut ? f(t) : 0.0;
  }
  return v * mapped.asDiagonal() * v.adjoint();
}

}  // namespace

// Eigenvalues below the rank threshold map to zero so that projections stay exact.
Matrix sqrt_psd(const PositiveOperator& a) {
  return spectral_map(a, [](double t) { return std::sqrt(t); });
}

Matrix inverse_sqrt_on_support(const PositiveOperator& a) {
  return spectral_map(a, [](double t) { return 1.0 / std::sqrt(t); });
}

Matrix pseudo_inverse(const PositiveOperator& a) {
  return spectral_map(a, [](double t) { return 1.0 / t; });
}

Subspace support(const PositiveOperator& a) {
  return Subspace{a.dim(), a.eigenvectors().leftCols(a.numerical_rank())};
}

double kernel_weight(const PositiveOperator& a, const PureState& phi) {
  if (phi.dim() != a.dim()) {
    throw DimensionMismatch("state has dimension " + std::to_string(a.dim()) +
                            ", vector has dimension " + std::to_string(phi.dim()));
  }
  const int r = a.numerical_rank();
  const auto kernel = a.eigenvectors().rightCols(a.dim() - r);
  return (kernel.adjoint() * phi.vector()).squaredNorm();
}

bool range_membership(const PositiveOperator& a, const PureState& phi, double eps_mem) {
  return kernel_weight(a, phi) <= eps_mem;
}

int numerical_rank(const Matrix& m, double eps_rank) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  return static_cast<int>((s.array() > eps_rank * s(0)).count());
}

namespace {

void require_same_ambient(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim != v.ambient_dim) {
    throw DimensionMismatch("subspaces live in C^" + std::to_string(u.ambient_dim) + " and C^" +
                            std::to_string(v.ambient_dim));
  }
}

Matrix concat(const Subspace& u, const Subspace& v) {
  Matrix joined(u.ambient_dim, u.dim() + v.dim());
  joined << u.basis, v.basis;
  return joined;
}

}  // namespace

int subspace_intersection_dim(const Subspace& u, const Subspace& v, double eps_rank) {
  require_same_ambient(u, v);
  if (u.dim() == 0 || v.dim() == 0) return 0;
  const int r = numerical_rank(concat(u, v), eps_rank);
  return std::max(0, u.dim() + v.dim() - r);
}

Subspace subspace_intersection(const Subspace& u, const Subspace& v, double eps_rank) {
  require_same_ambient(u, v);
  Subspace out{u.ambient_dim, Matrix(u.ambient_dim, 0)};
  if (u.dim() == 0 || v.dim() == 0) return out;
  const Matrix joined = concat(u, v);
  Eigen::JacobiSVD<Matrix> svd(joined, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const int r = s(0) > 0.0 ? static_cast<int>((s.array() > eps_rank * s(0)).count()) : 0;
  const int k = u.dim() + v.dim() - r;
  if (k <= 0) return out;
  // Null vectors (alpha, beta) of [U | V] give U alpha = -V beta in both subspaces.
  const Matrix null = svd.matrixV().rightCols(k);
  const Matrix raw = u.basis * null.topRows(u.dim());
  Eigen::JacobiSVD<Matrix> orth(raw, Eigen::ComputeThinU);
  out.basis = orth.matrixU().leftCols(k);
  return out;
}

}  // namespace qcompat
