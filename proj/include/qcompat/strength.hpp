#pragma once

// Strength of an effect along a ray: the largest lambda in [0, 1] with
// lambda * P_phi <= T.

#include <cstdint>

#include "qcompat/state_algebra.hpp"

namespace qcompat {

/// Kernel weights below this (but above eps_mem^2) are reported as near the
/// range boundary, where the strength jumps between 0 and a positive value.
inline constexpr double kNearBoundaryWeight = 1e-4;

struct StrengthResult {
  double value = 0.0;
  /// phi in rng T^{1/2}
  bool in_range = false;
  /// Kernel weight in (eps_mem^2, 1e-4): the classification is fragile.
  bool near_boundary = false;
  double kernel_weight = 0.0;
};

/// Closed form: 1 / sum_{t_i > cut} |<e_i, phi>|^2 / t_i when phi is in the
/// range, else 0.
StrengthResult strength(const Effect& t, const PureState& phi, const Tolerances& tol = {});

inline constexpr double kOracleFeasibility = -1e-13;
inline constexpr int kBisectionCap = 80;

/// Bisection on lambda of min-eig(T - lambda P) >= -1e-13. Independent of the
/// spectral formula; used as the verification oracle.
double strength_oracle(const Effect& t, const PureState& p, double tol = 1e-10);

/// C^2(A, R) for A = lambda P + mu Q, P ⊥ Q, R in their span, with overlap = tr PR.
/// Requires 0 < lambda < mu < 1 and lambda + mu = 1 within 1e-12; throws InvalidWeights.
double two_state_formula(double lambda, double mu, double overlap);

inline constexpr double kStrengthEqualityTol = 1e-8;

/// Compares strengths along the eigenvectors of both effects plus `n_rays`
/// seeded random rays. `true` is evidence of equality, `false` is proof of
/// inequality.
bool effects_equal_by_strength(const Effect& s, const Effect& t, int n_rays, std::uint64_t seed,
                               const Tolerances& tol = {});

}  // namespace qcompat
