#pragma once

// Compatibility preservers: the pure-state invariants a preserver must respect
// (rank, independence, transition probability), reconstruction of the
// implementing unitary or antiunitary operator, and end-to-end verification
// that a transform acts as A -> U A U^* on sampled states.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcompat/state_algebra.hpp"
#include "qcompat/symmetry.hpp"

namespace qcompat {

inline constexpr double kDefaultSymmetryTol = 1e-8;
inline constexpr double kDistinctInputs = 1e-8;

/// Validated, canonicalized state. Throws DimensionMismatch.
DensityOperator apply_symmetry(const SymmetryOp& s, const DensityOperator& a);
PureState apply_symmetry(const SymmetryOp& s, const PureState& p);

/// tr PQ = |<phi, psi>|^2
double transition_prob(const PureState& p, const PureState& q);

/// ||P - Q||_F between the projections.
double projection_distance(const PureState& p, const PureState& q);

/// The ranges of the pure states span a space of dimension equal to their count.
bool independent(const std::vector<PureState>& pures);

/// Size of the largest independent family of pure states compatible with A
/// found among the support eigenvectors and `budget` seeded samples.
/// Requires budget >= dim^2.
int rank_via_compatibility(const DensityOperator& a, int budget, std::uint64_t seed,
                           const Tolerances& tol = {});

/// D ∈ M^{ic}: D is incompatible with every member of M.
bool ic_set_member(const DensityOperator& d, const std::vector<DensityOperator>& m,
                   const Tolerances& tol = {});

struct CharacterizationProbe {
  /// No witness B != A was found in the sampled double ic-set.
  bool consistent = true;
  std::optional<DensityOperator> witness;
  /// Members of {A}^{ic} gathered (random plus targeted).
  int ic_members = 0;
  /// A itself lies in the sampled double ic-set.
  bool self_included = true;
};

/// Randomized check of "{A}^{ic ic} = {A} iff A is pure" (dim <= 6).
CharacterizationProbe pure_characterization_probe(const DensityOperator& a, int samples,
                                                  std::uint64_t seed, const Tolerances& tol = {});

/// Pairs (input, output) of pure states; inputs pairwise distinct.
class PureStateMap {
 public:
  PureStateMap() = default;
  explicit PureStateMap(int dim) : dim_(dim) {}

  /// Throws DimensionMismatch, or InvalidArgument for a repeated input.
  void add(PureState input, PureState output);

  int dim() const { return dim_; }
  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<PureState, PureState>>& pairs() const { return pairs_; }

  /// Output whose input matches `input` within `tol` (projection distance).
  const PureState* find(const PureState& input, double tol) const;

 private:
  int dim_ = 0;
  std::vector<std::pair<PureState, PureState>> pairs_;
};

struct Probe {
  std::string name;
  PureState state;
};

/// e_i for all i, (e_1 + e_j)/sqrt(2) for j >= 2, and (e_1 + i e_2)/sqrt(2).
std::vector<Probe> wigner_probes(int dim);

/// Recovers (U, antiunitary) from a transition-probability-preserving pure
/// state map containing the Wigner probes. Phase convention: the first
/// nonzero entry of U's first column is real positive.
/// Throws IncompleteMap, InvalidArgument (dim < 2) or NotASymmetry.
SymmetryOp wigner_reconstruct(const PureStateMap& map, int dim, double tol = kDefaultSymmetryTol);

using StateTransform = std::function<DensityOperator(const DensityOperator&)>;

struct VerifyResult {
  bool verdict = false;
  SymmetryOp symmetry;
  double max_error = 0.0;
  /// Mixed states compared against U A U^*.
  int mixed_checked = 0;
  /// Strength agreement between phi(A) and U A U^* on sampled rays.
  bool strengths_agree = true;
  /// Index of the first mixed sample exceeding tol, -1 if none.
  int first_failure = -1;
};

/// Builds the pure-state map of `transform` on the Wigner probes and extra
/// random rays, reconstructs U, and compares transform(A) with U A U^* on
/// two-level probes 0.4 P + 0.6 Q and `n_mixed` seeded states of assorted rank.
/// Certifies consistency on samples only. Propagates NotASymmetry.
VerifyResult verify_theorem(const StateTransform& transform, int dim, int n_mixed,
                            std::uint64_t seed, double tol = kDefaultSymmetryTol);

/// Pure-state-only verification of a stored map: reconstruction plus
/// reproduction of every pair.
VerifyResult verify_map(const PureStateMap& map, double tol = kDefaultSymmetryTol);

/// Ratio |tr(V^dagger U)| / dim, 1 when U and V agree up to global phase.
double phase_overlap(const Matrix& u, const Matrix& v);

}  // namespace qcompat
