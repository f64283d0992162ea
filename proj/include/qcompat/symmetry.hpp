#pragma once

#include "qcompat/state_algebra.hpp"

namespace qcompat {

/// Unitary U, or the antiunitary U∘K where K conjugates entrywise in the
/// standard basis.
struct SymmetryOp {
  Matrix u;
  bool antiunitary = false;

  int dim() const { return static_cast<int>(u.rows()); }
  static SymmetryOp identity(int dim, bool antiunitary = false);
};

inline constexpr double kUnitaryTol = 1e-10;

/// Throws InvalidArgument unless u^dagger u = I within 1e-10.
void check_unitary(const SymmetryOp& s);

/// U phi, or U conj(phi).
Vector apply_to_vector(const SymmetryOp& s, const Vector& phi);

/// U M U^dagger, or U conj(M) U^dagger; no validation of M.
Matrix apply_to_matrix(const SymmetryOp& s, const Matrix& m);

}  // namespace qcompat
