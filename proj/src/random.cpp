#include "qcompat/random.hpp"

#include <array>
#include <cmath>

namespace qcompat {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Rng make_rng(std::uint64_t seed) { return Rng(derive_seed(seed, 0x5eed)); }

namespace {

Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  }
  return g;
}

// Floor keeps every requested eigenvalue well above the rank threshold.
RealVector random_spectrum(int rank, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  RealVector w(rank);
  for (int i = 0; i < rank; ++i) w(i) = expo(rng);
  w /= w.sum();
  const double floor = 0.05;
  return (floor / rank + (1.0 - floor) * w.array()).matrix();
}

DensityOperator assemble(const Matrix& vectors, const RealVector& spectrum) {
  Matrix rho = vectors * spectrum.asDiagonal() * vectors.adjoint();
  rho = hermitian_part(rho);
  rho /= rho.trace().real();
  return validate_density(rho);
}

}  // namespace

Vector random_unit_vector(int dim, Rng& rng) {
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_unitary(int dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

DensityOperator random_density(int dim, int rank, Rng& rng) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  if (rank < 1 || rank > dim) {
    throw InvalidRank("rank " + std::to_string(rank) + " outside [1, " + std::to_string(dim) + "]");
  }
  const Matrix u = random_unitary(dim, rng);
  return assemble(u.leftCols(rank), random_spectrum(rank, rng));
}

DensityOperator random_density(int dim, int rank, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_density(dim, rank, rng);
}

DensityOperator random_density_in(const Matrix& basis, int rank, Rng& rng) {
  const int k = static_cast<int>(basis.cols());
  if (rank < 1 || rank > k) {
    throw InvalidRank("rank " + std::to_string(rank) + " outside [1, " + std::to_string(k) + "]");
  }
  const Matrix w = random_unitary(k, rng);
  return assemble(basis * w.leftCols(rank), random_spectrum(rank, rng));
}

PureState random_pure(int dim, Rng& rng) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  return PureState::normalized(random_unit_vector(dim, rng));
}

PureState random_pure(int dim, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_pure(dim, rng);
}

PureState random_pure_in(const Matrix& basis, Rng& rng) {
  if (basis.cols() == 0) throw InvalidArgument("cannot draw from the zero subspace");
  return PureState::normalized(basis * random_unit_vector(static_cast<int>(basis.cols()), rng));
}

SymmetryOp random_symmetry(int dim, bool antiunitary, std::uint64_t seed) {
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  Rng rng = make_rng(seed);
  return SymmetryOp{random_unitary(dim, rng), antiunitary};
}

}  // namespace qcompat
