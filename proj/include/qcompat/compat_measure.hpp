#pragma once

// Compatibility of states: support-intersection detection and the
// decomposition-based compatibility measure
//
//   C(A, B) = sup { sum_n sqrt(l_n m_n) : sum_n l_n Q_n = A, sum_n m_n Q_n = B,
//                   Q_n pure, l, m probability vectors },
//
// evaluated as a certified lower bound.

#include <cstdint>
#include <vector>

#include "qcompat/state_algebra.hpp"

namespace qcompat {

struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> pures;
};

struct MeasureConfig {
  /// Number of shared pure states (weight on both sides); 0 selects 2 * dim.
  int components = 0;
  /// Random restarts of the sphere ascent.
  int restarts = 32;
  std::uint64_t seed = 0;
  /// Frobenius tolerance on both reconstructions.
  double feas_tol = 1e-6;
  /// Add the shorted geometric-mean decomposition as candidate 0.
  bool analytic_seed = true;
  Tolerances tol{};
};

struct MeasureResult {
  /// Lower bound on C(A, B), equal to certificate_value of the decompositions.
  double value = 0.0;
  /// Same pure states on both sides; the first `components` entries are the
  /// shared states, followed by the spectral decompositions of the two
  /// remainders (weight zero on the other side). Empty when supports are disjoint.
  Decomposition decomposition_a;
  Decomposition decomposition_b;
  /// max of both Frobenius reconstruction errors
  double residual = 0.0;
  int restarts_used = 0;
  /// 0 is the analytic candidate, 1..restarts the random restarts, -1 if none ran.
  int best_restart = -1;
  int components = 0;
  int intersection_dim = 0;
};

/// supp A ∩ supp B is nontrivial.
bool is_compatible(const DensityOperator& a, const DensityOperator& b, const Tolerances& tol = {});

/// Orthonormal basis of supp A ∩ supp B.
Subspace support_intersection(const DensityOperator& a, const DensityOperator& b,
                              const Tolerances& tol = {});

/// tr sqrt(A^{1/2} B A^{1/2}); diagnostic only.
double fidelity(const DensityOperator& a, const DensityOperator& b);

/// sum_n sqrt(a_n b_n) over paired weights.
double certificate_value(const Decomposition& a, const Decomposition& b);

/// || sum_n w_n Q_n - target ||_F
double reconstruction_residual(const Decomposition& d, const DensityOperator& target);

/// Trace of the operator geometric mean of the compressions of A and B to
/// supp A ∩ supp B (shorted operators). Every joint decomposition satisfies
/// sum sqrt(l m) Q <= that mean, so this bounds C(A, B) from above.
double measure_upper_bound(const DensityOperator& a, const DensityOperator& b,
                           const Tolerances& tol = {});

/// Best certified lower bound over the analytic candidate and `restarts`
/// random starts refined by penalized ascent on (spheres x weights).
/// Throws DimensionMismatch, InvalidArgument (components too small) or Infeasible.
MeasureResult example_measure(const DensityOperator& a, const DensityOperator& b,
                              const MeasureConfig& cfg = {});

/// max of both argument orders with the same seed; exactly symmetric.
MeasureResult measure_symmetric(const DensityOperator& a, const DensityOperator& b,
                                const MeasureConfig& cfg = {});

}  // namespace qcompat
