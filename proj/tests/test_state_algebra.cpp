#include "doctest.h"

#include <cmath>

#include "qcompat/random.hpp"
#include "qcompat/state_algebra.hpp"

using namespace qcompat;

namespace {

Matrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<cplx>().asDiagonal();
}

Subspace span(std::initializer_list<int> axes, int dim) {
  Matrix b(dim, static_cast<Eigen::Index>(axes.size()));
  Eigen::Index c = 0;
  for (int a : axes) b.col(c++) = Vector::Unit(dim, a);
  return Subspace{dim, b};
}

}  // namespace

TEST_CASE("validate_density: spectra and ranks") {
  const DensityOperator pure = validate_density(diag({1.0, 0.0}));
  CHECK(pure.numerical_rank() == 1);
  CHECK(pure.eigenvalues()(0) == doctest::Approx(1.0));
  CHECK(pure.eigenvalues()(1) == doctest::Approx(0.0));

  const DensityOperator mixed = validate_density(Matrix::Identity(3, 3) / 3.0);
  CHECK(mixed.numerical_rank() == 3);
  for (int i = 0; i < 3; ++i) CHECK(mixed.eigenvalues()(i) == doctest::Approx(1.0 / 3.0));

  const DensityOperator tail = validate_density(diag({0.5, 0.5, 1e-15}), 1e-10);
  CHECK(tail.numerical_rank() == 2);
}

TEST_CASE("validate_density: error paths") {
  Matrix m = diag({0.5, 0.5});
  m(0, 1) = cplx(0.1, 0.0);
  CHECK_THROWS_AS(validate_density(m), NotHermitian);
  CHECK_THROWS_AS(validate_density(diag({1.5, -0.5})), NotPSD);
  CHECK_THROWS_AS(validate_density(diag({0.5, 0.4})), TraceNotOne);
  CHECK_THROWS_AS(validate_density(Matrix(2, 3)), DimensionMismatch);
  // Roundoff-size negatives are clamped, not rejected.
  const DensityOperator clamped = validate_density(diag({1.0 + 5e-13, -5e-13}));
  CHECK(clamped.eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("validate_effect bounds the spectrum by one") {
  CHECK_NOTHROW(validate_effect(diag({1.0, 0.3})));
  CHECK_THROWS_AS(validate_effect(diag({1.2, 0.3})), NotAnEffect);
  CHECK_THROWS_AS(validate_effect(diag({0.5, -0.1})), NotPSD);
}

TEST_CASE("PureState requires a unit vector") {
  CHECK_THROWS_AS(PureState(Vector::Constant(2, cplx(1.0, 0.0))), NotUnitVector);
  const PureState p = PureState::normalized(Vector::Constant(2, cplx(1.0, 1.0)));
  CHECK(p.vector().norm() == doctest::Approx(1.0));
  CHECK((p.projection() * p.projection() - p.projection()).norm() < 1e-10);
  CHECK(p.projection().trace().real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(PureState::normalized(Vector::Zero(3)), NotUnitVector);
}

TEST_CASE("sqrt_psd") {
  const Matrix r = sqrt_psd(validate_density(diag({0.25, 0.75})));
  CHECK((r - diag({0.5, std::sqrt(0.75)})).norm() < 1e-14);

  const PureState p = random_pure(4, 11);
  CHECK((sqrt_psd(to_density(p)) - p.projection()).norm() < 1e-10);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int d = 2 + static_cast<int>(seed % 6);
    const DensityOperator a = random_density(d, 1 + static_cast<int>(seed % d), seed);
    const Matrix s = sqrt_psd(a);
    CHECK((s * s - a.matrix()).norm() <= 1e-10);
  }
}

TEST_CASE("support") {
  const PureState p = random_pure(3, 5);
  const Subspace sp = support(to_density(p));
  CHECK(sp.dim() == 1);
  CHECK(std::abs(std::abs(sp.basis.col(0).dot(p.vector())) - 1.0) < 1e-12);

  CHECK(support(validate_density(Matrix::Identity(4, 4) / 4.0)).dim() == 4);

  const Subspace s2 = support(validate_density(diag({0.6, 0.4, 0.0})));
  CHECK(s2.dim() == 2);
  CHECK(subspace_intersection_dim(s2, span({0, 1}, 3)) == 2);
}

TEST_CASE("range_membership") {
  const DensityOperator full = random_density(3, 3, 1);
  CHECK(range_membership(full, random_pure(3, 2)));

  const DensityOperator e1 = validate_density(diag({1.0, 0.0}));
  CHECK_FALSE(range_membership(e1, PureState(Vector::Unit(2, 1))));
  CHECK_FALSE(range_membership(e1, PureState::normalized(Vector::Ones(2))));
  CHECK(range_membership(e1, PureState(Vector::Unit(2, 0))));
  CHECK_THROWS_AS(range_membership(e1, random_pure(3, 1)), DimensionMismatch);
}

TEST_CASE("subspace_intersection_dim") {
  const Subspace u = span({0, 1}, 3);
  CHECK(subspace_intersection_dim(u, u) == 2);
  CHECK(subspace_intersection_dim(span({0}, 2), span({1}, 2)) == 0);
  CHECK(subspace_intersection_dim(span({0, 1}, 3), span({1, 2}, 3)) == 1);
  CHECK_THROWS_AS(subspace_intersection_dim(span({0}, 2), span({0}, 3)), DimensionMismatch);

  const Subspace common = subspace_intersection(span({0, 1}, 3), span({1, 2}, 3));
  REQUIRE(common.dim() == 1);
  CHECK(std::abs(common.basis(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("random generators") {
  const DensityOperator pure = random_density(2, 1, 99);
  CHECK(pure.numerical_rank() == 1);
  CHECK(pure.matrix().trace().real() == doctest::Approx(1.0));
  CHECK(random_pure(5, 3).vector().norm() == doctest::Approx(1.0));
  const SymmetryOp s = random_symmetry(6, false, 4);
  CHECK((s.u.adjoint() * s.u - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(random_density(3, 0, 1), InvalidRank);
  CHECK_THROWS_AS(random_density(3, 4, 1), InvalidRank);
  CHECK((random_density(4, 2, 17).matrix() - random_density(4, 2, 17).matrix()).norm() == 0.0);
}

TEST_CASE("property: generated states are consistent") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int d = 1 + static_cast<int>(seed % 8);
    const int k = 1 + static_cast<int>((seed / 8) % d);
    const DensityOperator a = random_density(d, k, seed);
    const Matrix& v = a.eigenvectors();
    CHECK((v.adjoint() * v - Matrix::Identity(d, d)).norm() <= 1e-10);
    CHECK(std::abs(a.eigenvalues().sum() - 1.0) <= 1e-12);
    CHECK(a.numerical_rank() == k);
    CHECK(support(a).dim() ==
          static_cast<int>((a.eigenvalues().array() > a.rank_threshold()).count()));

    // Any combination of support eigenvectors lies in the range.
    Rng rng = make_rng(seed + 1000);
    CHECK(range_membership(a, random_pure_in(support(a).basis, rng)));
  }
}

TEST_CASE("property: intersection dimension is symmetric and bounded") {
  Rng rng = make_rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 5;
    const int ku = 1 + trial % d;
    const int kv = 1 + (trial / 5) % d;
    const Matrix w = random_unitary(d, rng);
    const Subspace u{d, random_unitary(d, rng).leftCols(ku)};
    // Half the time, force a shared direction.
    Matrix vb = w.leftCols(kv);
    if (trial % 2 == 0) vb.col(0) = u.basis.col(0);
    const Subspace v{d, Eigen::HouseholderQR<Matrix>(vb).householderQ() * Matrix::Identity(d, kv)};
    const int uv = subspace_intersection_dim(u, v);
    CHECK(uv == subspace_intersection_dim(v, u));
    CHECK(uv <= std::min(ku, kv));
    CHECK(uv >= std::max(0, ku + kv - d));
    if (trial % 2 == 0) CHECK(uv >= 1);
  }
}
