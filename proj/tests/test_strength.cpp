#include "doctest.h"

#include <cmath>

#include "qcompat/preserver.hpp"
#include "qcompat/random.hpp"
#include "qcompat/strength.hpp"

using namespace qcompat;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

PureState plus2() { return PureState::normalized(Vector::Ones(2)); }

// 2x2 oracle: det(T - lambda P) = 0 is linear in lambda for rank-one P.
double two_by_two_strength(const Matrix& t, const Vector& phi) {
  const cplx det_t = t.determinant();
  // det(T - lP) = det T - l * <phi, adj(T) phi>, adj(T) = tr(T) I - T
  const Matrix adj = t.trace() * Matrix::Identity(2, 2) - t;
  const cplx slope = (phi.adjoint() * adj * phi)(0, 0);
  return std::min(1.0, det_t.real() / slope.real());
}

}  // namespace

TEST_CASE("strength: closed-form examples") {
  for (int d = 2; d <= 5; ++d) {
    const Effect mixed = validate_density(Matrix::Identity(d, d) / double(d));
    CHECK(strength(mixed, random_pure(d, d)).value == doctest::Approx(1.0 / d).epsilon(1e-12));
  }
  const PureState phi = random_pure(3, 8);
  CHECK(strength(to_density(phi), phi).value == doctest::Approx(1.0).epsilon(1e-12));

  const Effect t = validate_density(diag2(0.75, 0.25));
  const double expected = two_by_two_strength(diag2(0.75, 0.25), plus2().vector());
  CHECK(expected == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(strength(t, plus2()).value == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::abs(strength_oracle(t, plus2()) - 0.375) <= 1e-10);

  const StrengthResult outside = strength(validate_density(diag2(1.0, 0.0)), plus2());
  CHECK(outside.value == 0.0);
  CHECK_FALSE(outside.in_range);
  CHECK_FALSE(outside.near_boundary);
}

TEST_CASE("strength: near the range boundary") {
  const double w = 1e-6;
  Vector v(2);
  v << std::sqrt(1.0 - w), std::sqrt(w);
  const StrengthResult r = strength(validate_density(diag2(1.0, 0.0)), PureState::normalized(v));
  CHECK_FALSE(r.in_range);
  CHECK(r.near_boundary);
  CHECK(r.value == 0.0);
  CHECK(r.kernel_weight == doctest::Approx(w));
}

TEST_CASE("strength: dimension mismatch") {
  CHECK_THROWS_AS(strength(validate_density(diag2(0.5, 0.5)), random_pure(3, 1)),
                  DimensionMismatch);
  CHECK_THROWS_AS(strength_oracle(validate_density(diag2(0.5, 0.5)), random_pure(3, 1)),
                  DimensionMismatch);
}

TEST_CASE("strength_oracle: trivial cases") {
  const Effect half = validate_density(Matrix::Identity(2, 2) / 2.0);
  CHECK(std::abs(strength_oracle(half, random_pure(2, 3)) - 0.5) <= 1e-10);
  const PureState p = random_pure(4, 5);
  CHECK(std::abs(strength_oracle(to_density(p), p) - 1.0) <= 1e-10);
}

TEST_CASE("strength on general effects") {
  const Effect e = validate_effect(diag2(1.0, 0.5));
  CHECK(strength(e, PureState(Vector::Unit(2, 0))).value == doctest::Approx(1.0));
  CHECK(strength(e, plus2()).value == doctest::Approx(1.0 / (0.5 + 1.0)).epsilon(1e-14));
}

TEST_CASE("two_state_formula") {
  CHECK(two_state_formula(0.4, 0.6, 1.0) == 0.4);
  CHECK(two_state_formula(0.4, 0.6, 0.0) == 0.6);
  CHECK(two_state_formula(0.4, 0.6, 0.5) == doctest::Approx(0.48).epsilon(1e-14));

  Matrix a = diag2(0.4, 0.6);
  CHECK(strength(validate_density(a), plus2()).value == doctest::Approx(0.48).epsilon(1e-13));

  CHECK_THROWS_AS(two_state_formula(0.6, 0.4, 0.5), InvalidWeights);
  CHECK_THROWS_AS(two_state_formula(0.3, 0.6, 0.5), InvalidWeights);
  CHECK_THROWS_AS(two_state_formula(0.5, 0.5, 0.5), InvalidWeights);
  CHECK_THROWS_AS(two_state_formula(0.4, 0.6, 1.5), InvalidWeights);
}

TEST_CASE("effects_equal_by_strength") {
  const DensityOperator a = random_density(3, 2, 10);
  CHECK(effects_equal_by_strength(a, a, 20, 1));
  CHECK_FALSE(effects_equal_by_strength(validate_density(diag2(1.0, 0.0)),
                                        validate_density(diag2(0.0, 1.0)), 5, 1));
  const DensityOperator b = random_density(4, 4, 12);
  const DensityOperator rotated = apply_symmetry(random_symmetry(4, false, 13), b);
  CHECK_FALSE(effects_equal_by_strength(b, rotated, 50, 2));
  CHECK_THROWS_AS(effects_equal_by_strength(a, b, 3, 1), DimensionMismatch);
}

TEST_CASE("property: spectral strength matches the bisection oracle") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int d = 2 + static_cast<int>(seed % 5);
    const int k = 1 + static_cast<int>((seed / 5) % d);
    const DensityOperator t = random_density(d, k, seed);
    Rng rng = make_rng(seed + 7);
    const PureState phi = seed % 2 == 0 ? random_pure_in(support(t).basis, rng) : random_pure(d, rng);
    CHECK(std::abs(strength(t, phi).value - strength_oracle(t, phi)) <= 1e-7);
  }
}

TEST_CASE("property: strength is invariant under symmetries") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int d = 2 + static_cast<int>(seed % 5);
    const DensityOperator t = random_density(d, 1 + static_cast<int>(seed % d), seed);
    Rng rng = make_rng(seed);
    const PureState phi = seed % 3 == 0 ? random_pure_in(support(t).basis, rng) : random_pure(d, rng);
    const SymmetryOp s = random_symmetry(d, seed % 2 == 1, seed + 500);
    const double before = strength(t, phi).value;
    const double after = strength(apply_symmetry(s, t), apply_symmetry(s, phi)).value;
    CHECK(std::abs(before - after) <= 1e-10);
  }
}

TEST_CASE("property: strength is monotone in the effect") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const DensityOperator t = random_density(d, d, seed);
    const PureState q = random_pure(d, seed + 1);
    const double eps = 0.5 * strength(t, q).value;
    const Effect s = validate_effect(t.matrix() - eps * q.projection());
    for (int i = 0; i < 5; ++i) {
      const PureState phi = random_pure(d, seed * 10 + i);
      CHECK(strength(s, phi).value <= strength(t, phi).value + 1e-10);
    }
  }
}

TEST_CASE("property: extremal strengths sit on eigenvectors") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng = make_rng(seed);
    const double lambda = 0.1 + 0.35 * std::uniform_real_distribution<double>()(rng);
    const double mu = 1.0 - lambda;
    const Matrix u = random_unitary(2, rng);
    const PureState p(u.col(0));
    const PureState q(u.col(1));
    const DensityOperator a = validate_density(lambda * p.projection() + mu * q.projection());
    for (int i = 0; i < 20; ++i) {
      const double theta = (i == 0) ? 0.0 : (i == 1 ? M_PI / 2 : std::uniform_real_distribution<double>(0, M_PI / 2)(rng));
      const PureState r = PureState::normalized(std::cos(theta) * p.vector() +
                                                std::polar(std::sin(theta), 0.3 * i) * q.vector());
      const double s = strength(a, r).value;
      CHECK(s >= lambda - 1e-12);
      CHECK(s <= mu + 1e-12);
      if (std::abs(s - lambda) <= 1e-10) {
        CHECK((p.projection() * r.vector() - r.vector()).norm() <= 1e-6);
      }
      if (std::abs(s - mu) <= 1e-10) {
        CHECK((q.projection() * r.vector() - r.vector()).norm() <= 1e-6);
      }
    }
  }
}

TEST_CASE("property: two-level closed form equals the spectral strength") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng = make_rng(seed + 300);
    const int d = 2 + static_cast<int>(seed % 6);
    const double lambda = 0.05 + 0.4 * std::uniform_real_distribution<double>()(rng);
    const Matrix u = random_unitary(d, rng);
    const PureState p(u.col(0));
    const PureState q(u.col(1));
    const double theta = std::uniform_real_distribution<double>(0, M_PI / 2)(rng);
    const double phase = std::uniform_real_distribution<double>(0, 2 * M_PI)(rng);
    const PureState r = PureState::normalized(std::cos(theta) * p.vector() +
                                              std::polar(std::sin(theta), phase) * q.vector());
    const DensityOperator a =
        validate_density(lambda * p.projection() + (1.0 - lambda) * q.projection());
    const double overlap = transition_prob(p, r);
    CHECK(std::abs(two_state_formula(lambda, 1.0 - lambda, overlap) - strength(a, r).value) <= 1e-10);
  }
}
