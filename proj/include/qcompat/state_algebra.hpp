#pragma once

// Dense complex-matrix foundations: validated states and effects with a cached
// spectral decomposition, PSD square roots, supports and subspace geometry.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qcompat/errors.hpp"

namespace qcompat {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical thresholds standing in for exact ranges.
struct Tolerances {
  /// Eigenvalues/singular values at or below `rank * max` count as zero.
  double rank = 1e-10;
  /// A unit vector lies in a range when its squared kernel component is at most this.
  double membership = 1e-8;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kUnitTol = 1e-12;

/// Hermitian positive semidefinite operator with its spectral decomposition
/// cached in descending eigenvalue order. Only constructible through the
/// validating factories of the derived types.
class PositiveOperator {
 public:
  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  /// Descending, clamped at zero.
  const RealVector& eigenvalues() const { return eigenvalues_; }
  /// Column i belongs to eigenvalues()(i).
  const Matrix& eigenvectors() const { return eigenvectors_; }
  int numerical_rank() const { return rank_; }
  double eps_rank() const { return eps_rank_; }
  /// Absolute cut-off: eps_rank * largest eigenvalue.
  double rank_threshold() const;

 protected:
  PositiveOperator(Matrix m, RealVector values, Matrix vectors, double eps_rank);

 private:
  Matrix matrix_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
  double eps_rank_;
  int rank_;
};

class DensityOperator : public PositiveOperator {
 private:
  using PositiveOperator::PositiveOperator;
  friend DensityOperator validate_density(const Matrix&, double);
};

/// 0 <= T <= I. Every density operator is an effect.
class Effect : public PositiveOperator {
 public:
  Effect(const DensityOperator& state) : PositiveOperator(state) {}  // NOLINT

 private:
  using PositiveOperator::PositiveOperator;
  friend Effect validate_effect(const Matrix&, double);
};

/// Unit vector together with its rank-one projection.
class PureState {
 public:
  /// Requires ||v|| = 1 within 1e-12.
  explicit PureState(Vector v);
  /// Normalizes; rejects (near) zero vectors.
  static PureState normalized(const Vector& v);

  int dim() const { return static_cast<int>(vector_.size()); }
  const Vector& vector() const { return vector_; }
  const Matrix& projection() const { return projection_; }

 private:
  Vector vector_;
  Matrix projection_;
};

/// Subspace of C^ambient_dim given by an orthonormal basis (columns).
struct Subspace {
  int ambient_dim = 0;
  Matrix basis;
  int dim() const { return static_cast<int>(basis.cols()); }
};

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix& h);

/// Validates a density matrix. Throws NotHermitian, NotPSD, TraceNotOne or
/// DimensionMismatch (non-square).
DensityOperator validate_density(const Matrix& matrix, double eps_rank = Tolerances{}.rank);

/// Validates an effect: Hermitian with spectrum in [0, 1] (1e-12 slack).
Effect validate_effect(const Matrix& matrix, double eps_rank = Tolerances{}.rank);

DensityOperator to_density(const PureState& p, double eps_rank = Tolerances{}.rank);

/// Unique PSD square root by spectral mapping.
Matrix sqrt_psd(const PositiveOperator& a);

/// Moore-Penrose inverse of the square root restricted to the support.
Matrix inverse_sqrt_on_support(const PositiveOperator& a);

/// Moore-Penrose inverse (eigenvalues above threshold inverted, rest zero).
Matrix pseudo_inverse(const PositiveOperator& a);

/// Eigenvectors with eigenvalue above eps_rank * max eigenvalue.
Subspace support(const PositiveOperator& a);

/// Squared norm of the component of phi in the numerical kernel of a.
double kernel_weight(const PositiveOperator& a, const PureState& phi);

/// phi lies in rng A^{1/2} = supp A (finite dimension).
bool range_membership(const PositiveOperator& a, const PureState& phi,
                      double eps_mem = Tolerances{}.membership);

/// Numerical rank of a rectangular matrix via singular values > eps * sigma_max.
int numerical_rank(const Matrix& m, double eps_rank = Tolerances{}.rank);

/// dim U + dim V - rank [U | V].
int subspace_intersection_dim(const Subspace& u, const Subspace& v,
                              double eps_rank = Tolerances{}.rank);

/// Orthonormal basis of U ∩ V, with dimension subspace_intersection_dim(u, v).
Subspace subspace_intersection(const Subspace& u, const Subspace& v,
                               double eps_rank = Tolerances{}.rank);

/// max_ij |M - M^dagger|_ij
double hermiticity_defect(const Matrix& m);

/// (M + M^dagger) / 2
Matrix hermitian_part(const Matrix& m);

}  // namespace qcompat
