#include "qcompat/compat_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qcompat/random.hpp"

namespace qcompat {

namespace {

void require_same_dim(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("states have dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
  }
}

template <typename F>
Matrix map_hpd(const Matrix& h, F&& f) {
  const HermitianEigen eig = hermitian_eigen(hermitian_part(h));
  RealVector mapped = eig.values.unaryExpr(f);
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

// Shared pure states live in supp A ∩ supp B. A family supported there is
// dominated by A iff it is dominated by the shorted operator (W^† A^+ W)^{-1},
// so the search runs in intersection coordinates with positive definite targets.
struct Compressed {
  Matrix basis;  // d x m, orthonormal
  Matrix a;      // m x m
  Matrix b;
  int m() const { return static_cast<int>(basis.cols()); }
};

Compressed compress(const DensityOperator& a, const DensityOperator& b, const Tolerances& tol) {
  Compressed c;
  c.basis = support_intersection(a, b, tol).basis;
  if (c.m() == 0) return c;
  const auto inv = [](double v) { return 1.0 / v; };
  c.a = map_hpd(c.basis.adjoint() * pseudo_inverse(a) * c.basis, inv);
  c.b = map_hpd(c.basis.adjoint() * pseudo_inverse(b) * c.basis, inv);
  return c;
}

struct SharedPart {
  std::vector<Vector> dirs;  // unit vectors in intersection coordinates
  RealVector lambda;
  RealVector mu;
};

Matrix weighted_sum(const std::vector<Vector>& dirs, const RealVector& w) {
  const int m = static_cast<int>(dirs.front().size());
  Matrix s = Matrix::Zero(m, m);
  for (std::size_t k = 0; k < dirs.size(); ++k) s += w(k) * dirs[k] * dirs[k].adjoint();
  return s;
}

// Geometric mean decomposition: with T = (a^{-1/2} b a^{-1/2})^{1/2} = sum tau_j e_j e_j^†
// and x_j = a^{1/2} e_j, a = sum x_j x_j^†, b = sum tau_j^2 x_j x_j^†.
SharedPart geometric_mean_part(const Compressed& c, int components) {
  const int m = c.m();
  const Matrix a_half = map_hpd(c.a, [](double v) { return std::sqrt(std::max(v, 0.0)); });
  const Matrix a_mhalf = map_hpd(c.a, [](double v) { return 1.0 / std::sqrt(v); });
  const HermitianEigen t2 = hermitian_eigen(hermitian_part(a_mhalf * c.b * a_mhalf));
  SharedPart part;
  part.lambda = RealVector::Zero(components);
  part.mu = RealVector::Zero(components);
  for (int j = 0; j < components; ++j) {
    if (j < m) {
      const Vector x = a_half * t2.vectors.col(j);
      const double n2 = x.squaredNorm();
      part.dirs.push_back(x / std::sqrt(n2));
      part.lambda(j) = n2;
      part.mu(j) = std::max(t2.values(j), 0.0) * n2;
    } else {
      part.dirs.push_back(Vector::Unit(m, 0));
    }
  }
  return part;
}

struct PositivePart {
  Matrix excess;
  double penalty = 0.0;
};

// [X]_+ and (1/2) ||[X]_+||_F^2
PositivePart positive_part(const Matrix& x) {
  const HermitianEigen eig = hermitian_eigen(hermitian_part(x));
  const RealVector pos = eig.values.cwiseMax(0.0);
  return {eig.vectors * pos.asDiagonal() * eig.vectors.adjoint(), 0.5 * pos.squaredNorm()};
}

struct Gradient {
  std::vector<Vector> dirs;
  RealVector lambda;
  RealVector mu;
};

// Maximizes sum sqrt(l_k m_k + delta) - rho/2 (||[S_l - a]_+||^2 + ||[S_m - b]_+||^2)
// by projected gradient ascent with backtracking; the directions move on the
// unit spheres, the weights on the nonnegative orthant. rho escalates and delta
// decays across rounds.
class PenalizedAscent {
 public:
  static constexpr int kRounds = 6;
  static constexpr int kMaxIterations = 300;

  explicit PenalizedAscent(const Compressed& c) : c_(c) {}

  SharedPart run(SharedPart x) const {
    for (int round = 0; round < kRounds; ++round) {
      const double rho = std::pow(10.0, 1.0 + round);
      const double delta = 1e-4 * std::pow(1e-8, round / double(kRounds - 1));
      Gradient g;
      double f = evaluate(x, rho, delta, &g);
      double step = 1.0 / rho;
      int stalled = 0;
      for (int it = 0; it < kMaxIterations; ++it) {
        bool accepted = false;
        SharedPart y;
        double fy = 0.0;
        for (int bt = 0; bt < 40; ++bt) {
          y = advance(x, g, step);
          fy = evaluate(y, rho, delta, nullptr);
          if (fy >= f) {
            accepted = true;
            break;
          }
          step *= 0.5;
        }
        if (!accepted) break;
        const double gain = fy - f;
        x = std::move(y);
        f = evaluate(x, rho, delta, &g);
        step *= 2.0;
        stalled = gain <= 1e-11 * std::max(1.0, std::abs(f)) ? stalled + 1 : 0;
        if (stalled >= 5) break;
      }
    }
    return x;
  }

 private:
  double evaluate(const SharedPart& x, double rho, double delta, Gradient* g) const {
    const PositivePart pa = positive_part(weighted_sum(x.dirs, x.lambda) - c_.a);
    const PositivePart pb = positive_part(weighted_sum(x.dirs, x.mu) - c_.b);
    const int n = static_cast<int>(x.dirs.size());
    double objective = 0.0;
    for (int k = 0; k < n; ++k) objective += std::sqrt(x.lambda(k) * x.mu(k) + delta);
    if (g != nullptr) {
      g->dirs.resize(n);
      g->lambda.resize(n);
      g->mu.resize(n);
      for (int k = 0; k < n; ++k) {
        const Vector& z = x.dirs[k];
        const Vector ea = pa.excess * z;
        const Vector eb = pb.excess * z;
        const double root = 2.0 * std::sqrt(x.lambda(k) * x.mu(k) + delta);
        g->lambda(k) = x.mu(k) / root - rho * z.dot(ea).real();
        g->mu(k) = x.lambda(k) / root - rho * z.dot(eb).real();
        const Vector gz = -2.0 * rho * (x.lambda(k) * ea + x.mu(k) * eb);
        g->dirs[k] = gz - z.dot(gz).real() * z;
      }
    }
    return objective - rho * (pa.penalty + pb.penalty);
  }

  static SharedPart advance(const SharedPart& x, const Gradient& g, double step) {
    SharedPart y;
    y.lambda = (x.lambda + step * g.lambda).cwiseMax(0.0);
    y.mu = (x.mu + step * g.mu).cwiseMax(0.0);
    y.dirs.reserve(x.dirs.size());
    for (std::size_t k = 0; k < x.dirs.size(); ++k) {
      const Vector moved = x.dirs[k] + step * g.dirs[k];
      y.dirs.push_back(moved / moved.norm());
    }
    return y;
  }

  const Compressed& c_;
};

SharedPart random_start(const Compressed& c, int components, std::uint64_t seed) {
  Rng rng(seed);
  SharedPart part;
  for (int k = 0; k < components; ++k) part.dirs.push_back(random_unit_vector(c.m(), rng));
  part.lambda = RealVector::Constant(components, c.a.trace().real() / (2.0 * components));
  part.mu = RealVector::Constant(components, c.b.trace().real() / (2.0 * components));
  return part;
}

struct Candidate {
  double value = 0.0;
  double residual = 0.0;
  Decomposition a;
  Decomposition b;
};

// Largest s with S <= s A, for S supported in supp A.
double domination_ratio(const DensityOperator& a, const Matrix& s) {
  const Matrix w = inverse_sqrt_on_support(a);
  return hermitian_eigen(hermitian_part(w * s * w)).values(0);
}

// Scales the shared weights until both families are dominated exactly, then
// completes each side with the spectral decomposition of its remainder.
Candidate finalize(const DensityOperator& a, const DensityOperator& b, const Compressed& c,
                   SharedPart x) {
  const int d = a.dim();
  std::vector<Vector> full;
  full.reserve(x.dirs.size());
  for (const Vector& z : x.dirs) full.push_back(c.basis * z);

  const double ra = domination_ratio(a, weighted_sum(full, x.lambda));
  if (ra > 1.0) x.lambda /= ra;
  const double rb = domination_ratio(b, weighted_sum(full, x.mu));
  if (rb > 1.0) x.mu /= rb;

  const HermitianEigen rem_a = hermitian_eigen(hermitian_part(a.matrix() - weighted_sum(full, x.lambda)));
  const HermitianEigen rem_b = hermitian_eigen(hermitian_part(b.matrix() - weighted_sum(full, x.mu)));

  Candidate out;
  for (std::size_t k = 0; k < full.size(); ++k) {
    const PureState q = PureState::normalized(full[k]);
    out.a.pures.push_back(q);
    out.a.weights.push_back(x.lambda(k));
    out.b.weights.push_back(x.mu(k));
  }
  for (int i = 0; i < d; ++i) {
    out.a.pures.push_back(PureState::normalized(rem_a.vectors.col(i)));
    out.a.weights.push_back(std::max(rem_a.values(i), 0.0));
    out.b.weights.push_back(0.0);
  }
  for (int i = 0; i < d; ++i) {
    out.a.pures.push_back(PureState::normalized(rem_b.vectors.col(i)));
    out.a.weights.push_back(0.0);
    out.b.weights.push_back(std::max(rem_b.values(i), 0.0));
  }
  out.b.pures = out.a.pures;
  out.value = certificate_value(out.a, out.b);
  out.residual = std::max(reconstruction_residual(out.a, a), reconstruction_residual(out.b, b));
  return out;
}

bool lexicographically_less(const Matrix& x, const Matrix& y) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const cplx u = x.data()[i];
    const cplx v = y.data()[i];
    if (u.real() != v.real()) return u.real() < v.real();
    if (u.imag() != v.imag()) return u.imag() < v.imag();
  }
  return false;
}

}  // namespace

Subspace support_intersection(const DensityOperator& a, const DensityOperator& b,
                              const Tolerances& tol) {
  require_same_dim(a, b);
  return subspace_intersection(support(a), support(b), tol.rank);
}

bool is_compatible(const DensityOperator& a, const DensityOperator& b, const Tolerances& tol) {
  require_same_dim(a, b);
  return subspace_intersection_dim(support(a), support(b), tol.rank) >= 1;
}

double fidelity(const DensityOperator& a, const DensityOperator& b) {
  require_same_dim(a, b);
  const Matrix sa = sqrt_psd(a);
  const HermitianEigen eig = hermitian_eigen(hermitian_part(sa * b.matrix() * sa));
  // Roundoff eigenvalues would contribute their square roots, ~1e-8 each.
  const double cut = a.eps_rank() * std::max(eig.values(0), 0.0);
  double f = 0.0;
  for (int i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cut) f += std::sqrt(eig.values(i));
  }
  return std::clamp(f, 0.0, 1.0);
}

double certificate_value(const Decomposition& a, const Decomposition& b) {
  if (a.weights.size() != b.weights.size()) {
    throw DimensionMismatch("decompositions have different lengths");
  }
  double v = 0.0;
  for (std::size_t n = 0; n < a.weights.size(); ++n) {
    v += std::sqrt(std::max(a.weights[n], 0.0) * std::max(b.weights[n], 0.0));
  }
  return v;
}

double reconstruction_residual(const Decomposition& d, const DensityOperator& target) {
  if (d.weights.size() != d.pures.size()) {
    throw DimensionMismatch("decomposition has mismatched weights and pure states");
  }
  Matrix sum = Matrix::Zero(target.dim(), target.dim());
  for (std::size_t n = 0; n < d.weights.size(); ++n) sum += d.weights[n] * d.pures[n].projection();
  return (sum - target.matrix()).norm();
}

double measure_upper_bound(const DensityOperator& a, const DensityOperator& b,
                           const Tolerances& tol) {
  require_same_dim(a, b);
  const Compressed c = compress(a, b, tol);
  if (c.m() == 0) return 0.0;
  const SharedPart part = geometric_mean_part(c, c.m());
  double v = 0.0;
  for (int j = 0; j < c.m(); ++j) v += std::sqrt(part.lambda(j) * part.mu(j));
  return v;
}

MeasureResult example_measure(const DensityOperator& a, const DensityOperator& b,
                              const MeasureConfig& cfg) {
  require_same_dim(a, b);
  const int components = cfg.components > 0 ? cfg.components : 2 * a.dim();
  if (components < std::max(a.numerical_rank(), b.numerical_rank())) {
    throw InvalidArgument("components (" + std::to_string(components) +
                          ") must be at least max(rank A, rank B)");
  }
  if (cfg.restarts < 0) throw InvalidArgument("restarts must be nonnegative");
  if (!(cfg.feas_tol > 0.0)) throw InvalidArgument("feasibility tolerance must be positive");

  MeasureResult result;
  result.components = components;
  const Compressed c = compress(a, b, cfg.tol);
  result.intersection_dim = c.m();
  if (c.m() == 0) return result;

  const PenalizedAscent ascent(c);
  bool found = false;
  Candidate best;
  for (int idx = cfg.analytic_seed ? 0 : 1; idx <= cfg.restarts; ++idx) {
    SharedPart start = idx == 0 ? geometric_mean_part(c, components)
                                : ascent.run(random_start(c, components, derive_seed(cfg.seed, idx)));
    Candidate cand = finalize(a, b, c, std::move(start));
    ++result.restarts_used;
    if (cand.residual <= cfg.feas_tol && (!found || cand.value > best.value)) {
      best = std::move(cand);
      result.best_restart = idx;
      found = true;
    }
  }
  if (!found) {
    std::ostringstream msg;
    msg << "no restart produced a certificate within feas_tol = " << cfg.feas_tol;
    throw Infeasible(msg.str());
  }
  result.value = best.value;
  result.residual = best.residual;
  result.decomposition_a = std::move(best.a);
  result.decomposition_b = std::move(best.b);
  return result;
}

MeasureResult measure_symmetric(const DensityOperator& a, const DensityOperator& b,
                                const MeasureConfig& cfg) {
  MeasureResult forward = example_measure(a, b, cfg);
  MeasureResult backward = example_measure(b, a, cfg);
  std::swap(backward.decomposition_a, backward.decomposition_b);
  if (forward.value > backward.value) return forward;
  if (backward.value > forward.value) return backward;
  // Ties resolve on argument content, not argument order.
  return lexicographically_less(b.matrix(), a.matrix()) ? backward : forward;
}

}  // namespace qcompat
