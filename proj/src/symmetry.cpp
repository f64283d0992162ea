#include "qcompat/symmetry.hpp"

#include <string>

namespace qcompat {

SymmetryOp SymmetryOp::identity(int dim, bool antiunitary) {
  return SymmetryOp{Matrix::Identity(dim, dim), antiunitary};
}

void check_unitary(const SymmetryOp& s) {
  if (s.u.rows() != s.u.cols() || s.u.rows() == 0) {
    throw DimensionMismatch("symmetry matrix must be square and nonempty");
  }
  const double defect = (s.u.adjoint() * s.u - Matrix::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff();
  if (defect > kUnitaryTol) {
    throw InvalidArgument("symmetry matrix is not unitary (max |U^dagger U - I| = " +
                          std::to_string(defect) + ")");
  }
}

Vector apply_to_vector(const SymmetryOp& s, const Vector& phi) {
  if (phi.size() != s.dim()) {
    throw DimensionMismatch("vector dimension " + std::to_string(phi.size()) +
                            " does not match symmetry dimension " + std::to_string(s.dim()));
  }
  return s.antiunitary ? Vector(s.u * phi.conjugate()) : Vector(s.u * phi);
}

Matrix apply_to_matrix(const SymmetryOp& s, const Matrix& m) {
  if (m.rows() != s.dim() || m.cols() != s.dim()) {
    throw DimensionMismatch("operator dimension " + std::to_string(m.rows()) +
                            " does not match symmetry dimension " + std::to_string(s.dim()));
  }
  return s.antiunitary ? Matrix(s.u * m.conjugate() * s.u.adjoint())
                       : Matrix(s.u * m * s.u.adjoint());
}

}  // namespace qcompat
