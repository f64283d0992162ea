#include "qcompat/preserver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qcompat/compat_measure.hpp"
#include "qcompat/random.hpp"
#include "qcompat/strength.hpp"

namespace qcompat {

DensityOperator apply_symmetry(const SymmetryOp& s, const DensityOperator& a) {
  return validate_density(hermitian_part(apply_to_matrix(s, a.matrix())), a.eps_rank());
}

PureState apply_symmetry(const SymmetryOp& s, const PureState& p) {
  return PureState::normalized(apply_to_vector(s, p.vector()));
}

double transition_prob(const PureState& p, const PureState& q) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatch("pure states have dimensions " + std::to_string(p.dim()) + " and " +
                            std::to_string(q.dim()));
  }
  return std::clamp(std::norm(p.vector().dot(q.vector())), 0.0, 1.0);
}

double projection_distance(const PureState& p, const PureState& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("pure states have different dimensions");
  return (p.projection() - q.projection()).norm();
}

bool independent(const std::vector<PureState>& pures) {
  if (pures.empty()) throw InvalidArgument("independence needs at least one pure state");
  const int d = pures.front().dim();
  Matrix cols(d, static_cast<Eigen::Index>(pures.size()));
  for (std::size_t i = 0; i < pures.size(); ++i) {
    if (pures[i].dim() != d) throw DimensionMismatch("pure states have different dimensions");
    cols.col(static_cast<Eigen::Index>(i)) = pures[i].vector();
  }
  return numerical_rank(cols, Tolerances{}.rank) == static_cast<int>(pures.size());
}

int rank_via_compatibility(const DensityOperator& a, int budget, std::uint64_t seed,
                           const Tolerances& tol) {
  const int d = a.dim();
  if (budget < d * d) {
    throw InvalidArgument("budget must be at least dim^2 = " + std::to_string(d * d));
  }
  std::vector<PureState> chosen;
  const auto offer = [&](const PureState& p) {
    if (!range_membership(a, p, tol.membership)) return;
    chosen.push_back(p);
    if (!independent(chosen)) chosen.pop_back();
  };
  for (int i = 0; i < d && static_cast<int>(chosen.size()) < d; ++i) {
    offer(PureState::normalized(a.eigenvectors().col(i)));
  }
  Rng rng = make_rng(seed);
  for (int i = 0; i < budget && static_cast<int>(chosen.size()) < d; ++i) {
    offer(random_pure(d, rng));
  }
  return static_cast<int>(chosen.size());
}

bool ic_set_member(const DensityOperator& d, const std::vector<DensityOperator>& m,
                   const Tolerances& tol) {
  return std::none_of(m.begin(), m.end(),
                      [&](const DensityOperator& x) { return is_compatible(d, x, tol); });
}

CharacterizationProbe pure_characterization_probe(const DensityOperator& a, int samples,
                                                  std::uint64_t seed, const Tolerances& tol) {
  const int d = a.dim();
  if (d > 6) throw InvalidArgument("the characterization probe is limited to dim <= 6");
  if (samples < 1) throw InvalidArgument("samples must be positive");
  Rng rng = make_rng(seed);
  const std::vector<DensityOperator> singleton{a};

  std::vector<DensityOperator> ic;
  std::uniform_int_distribution<int> low_rank(1, std::max(1, d - 1));
  for (int i = 0; i < samples; ++i) {
    DensityOperator x = random_density(d, low_rank(rng), rng);
    if (ic_set_member(x, singleton, tol)) ic.push_back(std::move(x));
  }

  CharacterizationProbe out;
  out.self_included = ic_set_member(a, ic, tol);
  int targeted = 0;
  const Subspace supp_a = support(a);
  std::uniform_int_distribution<int> any_rank(1, d);
  std::uniform_int_distribution<int> inner_rank(1, std::max(1, supp_a.dim()));
  for (int i = 0; i < samples; ++i) {
    DensityOperator b = i % 3 == 0   ? random_density(d, any_rank(rng), rng)
                        : i % 3 == 1 ? random_density_in(supp_a.basis, inner_rank(rng), rng)
                                     : to_density(random_pure(d, rng));
    if ((b.matrix() - a.matrix()).norm() <= kDistinctInputs) continue;
    // A ray inside supp B belongs to {A}^{ic} unless it meets supp A; when it
    // does belong, it is compatible with B and rules B out.
    std::vector<DensityOperator> extra;
    DensityOperator ray = to_density(random_pure_in(support(b).basis, rng));
    if (ic_set_member(ray, singleton, tol)) {
      extra.push_back(std::move(ray));
      ++targeted;
    }
    if (ic_set_member(b, ic, tol) && ic_set_member(b, extra, tol)) {
      out.consistent = false;
      out.witness = std::move(b);
      break;
    }
  }
  out.ic_members = static_cast<int>(ic.size()) + targeted;
  return out;
}

void PureStateMap::add(PureState input, PureState output) {
  if (dim_ == 0) dim_ = input.dim();
  if (input.dim() != dim_ || output.dim() != dim_) {
    throw DimensionMismatch("map pair does not match map dimension " + std::to_string(dim_));
  }
  if (find(input, kDistinctInputs) != nullptr) {
    throw InvalidArgument("map already contains this input projection");
  }
  pairs_.emplace_back(std::move(input), std::move(output));
}

const PureState* PureStateMap::find(const PureState& input, double tol) const {
  for (const auto& [in, out] : pairs_) {
    if (in.dim() == input.dim() && projection_distance(in, input) <= tol) return &out;
  }
  return nullptr;
}

std::vector<Probe> wigner_probes(int dim) {
  std::vector<Probe> probes;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    probes.push_back({"e" + std::to_string(i + 1), PureState(Vector::Unit(dim, i))});
  }
  for (int j = 1; j < dim; ++j) {
    Vector v = Vector::Zero(dim);
    v(0) = r;
    v(j) = r;
    probes.push_back({"e1+e" + std::to_string(j + 1), PureState::normalized(v)});
  }
  if (dim >= 2) {
    Vector v = Vector::Zero(dim);
    v(0) = r;
    v(1) = cplx(0.0, r);
    probes.push_back({"e1+ie2", PureState::normalized(v)});
  }
  return probes;
}

namespace {

std::string pair_name(const PureStateMap& map, std::size_t index,
                      const std::vector<Probe>& probes) {
  const PureState& in = map.pairs()[index].first;
  for (const Probe& p : probes) {
    if (projection_distance(p.state, in) <= kDistinctInputs) return p.name;
  }
  return "input #" + std::to_string(index);
}

Vector fix_global_phase(Vector v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8) {
      v *= std::conj(v(i)) / mag;
      break;
    }
  }
  return v;
}

}  // namespace

SymmetryOp wigner_reconstruct(const PureStateMap& map, int dim, double tol) {
  if (dim < 2) throw InvalidArgument("reconstruction needs dim >= 2");
  if (map.dim() != dim) {
    throw DimensionMismatch("map has dimension " + std::to_string(map.dim()) + ", expected " +
                            std::to_string(dim));
  }
  const std::vector<Probe> probes = wigner_probes(dim);
  const auto& pairs = map.pairs();

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const double before = transition_prob(pairs[i].first, pairs[j].first);
      const double after = transition_prob(pairs[i].second, pairs[j].second);
      if (std::abs(before - after) > tol) {
        throw NotASymmetry("transition probability " + std::to_string(before) + " mapped to " +
                               std::to_string(after),
                           pair_name(map, i, probes) + " / " + pair_name(map, j, probes));
      }
    }
  }

  const auto image = [&](int probe_index) -> const Vector& {
    const Probe& p = probes[static_cast<std::size_t>(probe_index)];
    const PureState* out = map.find(p.state, kDistinctInputs);
    if (out == nullptr) throw IncompleteMap("map lacks the probe " + p.name);
    return out->vector();
  };

  Matrix f(dim, dim);
  f.col(0) = fix_global_phase(image(0));
  for (int j = 1; j < dim; ++j) {
    const Vector& g = image(j);
    const Vector& h = image(dim + j - 1);
    const cplx along_first = f.col(0).dot(h);
    const cplx along_g = g.dot(h);
    if (std::abs(along_first) < 1e-6 || std::abs(along_g) < 1e-6) {
      throw NotASymmetry("superposition probe image is orthogonal to a basis image",
                         probes[static_cast<std::size_t>(dim + j - 1)].name);
    }
    const cplx alpha = along_g / along_first;
    f.col(j) = (alpha / std::abs(alpha)) * g;
  }

  const Vector& k = image(2 * dim - 1);
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i_unit(0.0, 1.0);
  const double t_unitary = std::norm(Vector(r * (f.col(0) + i_unit * f.col(1))).dot(k));
  const double t_anti = std::norm(Vector(r * (f.col(0) - i_unit * f.col(1))).dot(k));
  SymmetryOp s{f, false};
  if (1.0 - t_unitary <= tol) {
    s.antiunitary = false;
  } else if (1.0 - t_anti <= tol) {
    s.antiunitary = true;
  } else {
    throw NotASymmetry("complex probe image matches neither the unitary nor the antiunitary branch",
                       "e1+ie2");
  }

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double err = projection_distance(apply_symmetry(s, pairs[i].first), pairs[i].second);
    if (err > tol) {
      throw NotASymmetry("reconstructed operator misses a map pair by " + std::to_string(err),
                         pair_name(map, i, probes));
    }
  }
  return s;
}

double phase_overlap(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionMismatch("operator sizes differ");
  return std::abs((v.adjoint() * u).trace()) / static_cast<double>(u.rows());
}

VerifyResult verify_theorem(const StateTransform& transform, int dim, int n_mixed,
                            std::uint64_t seed, double tol) {
  if (dim < 2) throw InvalidArgument("verification needs dim >= 2");
  if (n_mixed < 0) throw InvalidArgument("n_mixed must be nonnegative");

  const auto image_of = [&](const PureState& p, const std::string& name) {
    const DensityOperator out = transform(to_density(p));
    if (out.dim() != dim) throw DimensionMismatch("transform changed the dimension");
    if (out.numerical_rank() != 1) {
      throw NotASymmetry("image of a pure state is not pure", name);
    }
    return PureState::normalized(out.eigenvectors().col(0));
  };

  PureStateMap map(dim);
  for (const Probe& p : wigner_probes(dim)) map.add(p.state, image_of(p.state, p.name));
  Rng rng = make_rng(derive_seed(seed, 1));
  for (int i = 0; i < dim + 2; ++i) {
    PureState p = random_pure(dim, rng);
    map.add(p, image_of(p, "random ray #" + std::to_string(i)));
  }

  VerifyResult result;
  result.symmetry = wigner_reconstruct(map, dim, tol);

  std::vector<DensityOperator> samples;
  for (int j = 1; j < std::min(dim, 4); ++j) {
    const Matrix two_level = 0.4 * Vector::Unit(dim, 0) * Vector::Unit(dim, 0).adjoint() +
                             0.6 * Vector::Unit(dim, j) * Vector::Unit(dim, j).adjoint();
    samples.push_back(validate_density(two_level));
  }
  Rng mixed_rng = make_rng(derive_seed(seed, 2));
  for (int i = 0; i < n_mixed; ++i) samples.push_back(random_density(dim, 1 + i % dim, mixed_rng));

  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const DensityOperator out = transform(samples[idx]);
    const DensityOperator expected = apply_symmetry(result.symmetry, samples[idx]);
    const double err = (out.matrix() - expected.matrix()).norm();
    result.max_error = std::max(result.max_error, err);
    if (err > tol && result.first_failure < 0) result.first_failure = static_cast<int>(idx);
    if (!effects_equal_by_strength(out, expected, 4, derive_seed(seed, 100 + idx))) {
      result.strengths_agree = false;
    }
  }
  result.mixed_checked = static_cast<int>(samples.size());
  result.verdict = result.first_failure < 0 && result.strengths_agree;
  return result;
}

VerifyResult verify_map(const PureStateMap& map, double tol) {
  VerifyResult result;
  result.symmetry = wigner_reconstruct(map, map.dim(), tol);
  for (const auto& [in, out] : map.pairs()) {
    result.max_error =
        std::max(result.max_error, projection_distance(apply_symmetry(result.symmetry, in), out));
  }
  result.verdict = result.max_error <= tol;
  return result;
}

}  // namespace qcompat
