#include "qcompat/strength.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcompat/random.hpp"

namespace qcompat {

namespace {

void require_same_dim(int a, int b) {
  if (a != b) {
    throw DimensionMismatch("effect has dimension " + std::to_string(a) + ", ray has dimension " +
                            std::to_string(b));
  }
}

double min_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

}  // namespace

StrengthResult strength(const Effect& t, const PureState& phi, const Tolerances& tol) {
  require_same_dim(t.dim(), phi.dim());
  StrengthResult out;
  out.kernel_weight = kernel_weight(t, phi);
  out.in_range = out.kernel_weight <= tol.membership;
  out.near_boundary = out.kernel_weight > tol.membership * tol.membership &&
                      out.kernel_weight < kNearBoundaryWeight;
  if (!out.in_range) return out;

  const Vector coeffs = t.eigenvectors().adjoint() * phi.vector();
  double inverse = 0.0;
  for (int i = 0; i < t.numerical_rank(); ++i) {
    inverse += std::norm(coeffs(i)) / t.eigenvalues()(i);
  }
  out.value = inverse > 0.0 ? std::clamp(1.0 / inverse, 0.0, 1.0) : 0.0;
  return out;
}

double strength_oracle(const Effect& t, const PureState& p, double tol) {
  require_same_dim(t.dim(), p.dim());
  const auto feasible = [&](double lambda) {
    return min_eigenvalue(t.matrix() - lambda * p.projection()) >= kOracleFeasibility;
  };
  if (feasible(1.0)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < kBisectionCap && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double two_state_formula(double lambda, double mu, double overlap) {
  if (!(lambda > 0.0 && lambda < mu && mu < 1.0)) {
    throw InvalidWeights("two-state weights must satisfy 0 < lambda < mu < 1");
  }
  if (std::abs(lambda + mu - 1.0) > 1e-12) {
    throw InvalidWeights("two-state weights must sum to 1");
  }
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw InvalidWeights("overlap tr PR must lie in [0, 1]");
  }
  // lambda*mu / ((mu - lambda) tr PR + lambda), written in the equivalent form
  // mu tr PR + lambda (1 - tr PR) so the endpoints come out exactly.
  const double denom = mu * overlap + lambda * (1.0 - overlap);
  return overlap >= 0.5 ? lambda * (mu / denom) : mu * (lambda / denom);
}

bool effects_equal_by_strength(const Effect& s, const Effect& t, int n_rays, std::uint64_t seed,
                               const Tolerances& tol) {
  if (s.dim() != t.dim()) {
    throw DimensionMismatch("effects have dimensions " + std::to_string(s.dim()) + " and " +
                            std::to_string(t.dim()));
  }
  const auto agree = [&](const PureState& ray) {
    return std::abs(strength(s, ray, tol).value - strength(t, ray, tol).value) <=
           kStrengthEqualityTol;
  };
  // Generic rays miss low-rank supports, so the eigenbases are always probed.
  for (const Effect* e : {&s, &t}) {
    for (int i = 0; i < e->numerical_rank(); ++i) {
      if (!agree(PureState::normalized(e->eigenvectors().col(i)))) return false;
    }
  }
  Rng rng = make_rng(seed);
  for (int i = 0; i < n_rays; ++i) {
    if (!agree(random_pure(s.dim(), rng))) return false;
  }
  return true;
}

}  // namespace qcompat
