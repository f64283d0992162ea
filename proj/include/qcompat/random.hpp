#pragma once

// Seeded generators for states, rays and symmetries. Every generator is a pure
// function of its seed; streams are derived with std::seed_seq.

#include <cstdint>
#include <random>

#include "qcompat/state_algebra.hpp"
#include "qcompat/symmetry.hpp"

namespace qcompat {

using Rng = std::mt19937_64;

/// Independent seed for sub-stream `stream` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Rng make_rng(std::uint64_t seed);

/// Complex Gaussian vector normalized to unit length.
Vector random_unit_vector(int dim, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase-fixed R diagonal).
Matrix random_unitary(int dim, Rng& rng);

/// State with exactly `rank` nonzero eigenvalues, Haar eigenvectors and a
/// Dirichlet-like spectrum bounded away from zero. Throws InvalidRank.
DensityOperator random_density(int dim, int rank, std::uint64_t seed);
DensityOperator random_density(int dim, int rank, Rng& rng);

/// State with random spectrum supported inside the span of `basis` columns.
DensityOperator random_density_in(const Matrix& basis, int rank, Rng& rng);

PureState random_pure(int dim, std::uint64_t seed);
PureState random_pure(int dim, Rng& rng);

/// Unit vector drawn uniformly from the span of the orthonormal `basis` columns.
PureState random_pure_in(const Matrix& basis, Rng& rng);

SymmetryOp random_symmetry(int dim, bool antiunitary, std::uint64_t seed);

}  // namespace qcompat
