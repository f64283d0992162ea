#include "qcompat/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "qcompat/compat_measure.hpp"
#include "qcompat/random.hpp"
#include "qcompat/strength.hpp"

namespace qcompat {

using nlohmann::json;

namespace {

struct Counts {
  int c1_pairs = 500;
  int c2_instances = 200;
  int c3_pairs = 50;
  int c4_pairs = 50;  // of each kind
  int c6_symmetries = 100;
  int c8_states = 200;
  int c9_cases = 200;
};

Counts counts_for(bool quick) {
  Counts c;
  if (quick) {
    c.c1_pairs = 100;
    c.c2_instances = 50;
    c.c3_pairs = 10;
    c.c4_pairs = 10;
    c.c6_symmetries = 20;
    c.c8_states = 40;
    c.c9_cases = 40;
  }
  return c;
}

// Restarts for the bulk support criteria; the analytic candidate and the
// random restarts each yield a feasible certificate on their own.
constexpr int kSupportRestarts = 4;

int dim_in(const AcceptanceOptions& o, std::uint64_t i) {
  return o.dim_lo + static_cast<int>(i % static_cast<std::uint64_t>(o.dim_hi - o.dim_lo + 1));
}

Rng stream(const AcceptanceOptions& o, int criterion, std::uint64_t i) {
  return make_rng(derive_seed(derive_seed(o.seed, static_cast<std::uint64_t>(criterion)), i));
}

std::uint64_t seed_for(const AcceptanceOptions& o, int criterion, std::uint64_t i) {
  return derive_seed(derive_seed(o.seed, static_cast<std::uint64_t>(criterion)), i);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Effect with spectrum in [0, 1]: a random state scaled so its top eigenvalue is s.
Effect random_effect(int d, int rank, Rng& rng) {
  const DensityOperator a = random_density(d, rank, rng);
  const double top = uniform(rng, 0.2, 1.0);
  return validate_effect(a.matrix() * (top / a.eigenvalues()(0)));
}

CriterionResult strength_oracle_agreement(const AcceptanceOptions& o, const Counts& n) {
  CriterionResult r{1, "strength oracle agreement"};
  double worst = 0.0;
  int in_range = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < n.c1_pairs; ++i) {
    Rng rng = stream(o, 1, i);
    const int d = dim_in(o, i);
    const int k = 1 + (i / (o.dim_hi - o.dim_lo + 1)) % d;
    const Effect t = i % 2 == 0 ? Effect(random_density(d, k, rng)) : random_effect(d, k, rng);
    const PureState phi = i % 4 < 2 ? random_pure_in(support(t).basis, rng) : random_pure(d, rng);
    const StrengthResult s = strength(t, phi);
    in_range += s.in_range ? 1 : 0;
    const double diff = std::abs(s.value - strength_oracle(t, phi));
    worst = std::max(worst, diff);
    if (!(diff <= 1e-7)) ++r.failures;
    ++r.cases;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.metrics = {{"max_abs_diff", worst}, {"in_range", in_range}, {"tolerance", 1e-7}};
  r.pass = r.failures == 0 && seconds < 30.0;
  return r;
}

CriterionResult two_level_closed_form(const AcceptanceOptions& o, const Counts& n) {
  CriterionResult r{2, "two-level closed form"};
  double worst = 0.0;
  int endpoints = 0;
  for (int i = 0; i < n.c2_instances; ++i) {
    Rng rng = stream(o, 2, i);
    const int d = dim_in(o, i);
    const double lambda = uniform(rng, 0.02, 0.48);
    const double mu = 1.0 - lambda;
    const Matrix u = random_unitary(d, rng);
    const PureState p(u.col(0));
    const PureState q(u.col(1));
    double theta = uniform(rng, 0.0, M_PI / 2);
    if (i % 10 == 0) theta = 0.0;
    if (i % 10 == 5) theta = M_PI / 2;
    const PureState rr =
        i % 10 == 0   ? p
        : i % 10 == 5 ? q
                      : PureState::normalized(std::cos(theta) * p.vector() +
                                              std::polar(std::sin(theta), uniform(rng, 0, 2 * M_PI)) *
                                                  q.vector());
    const double overlap = transition_prob(p, rr);
    const double closed = two_state_formula(lambda, mu, overlap);
    const DensityOperator a = validate_density(lambda * p.projection() + mu * q.projection());
    const double diff = std::abs(closed - strength(a, rr).value);
    worst = std::max(worst, diff);
    bool ok = diff <= 1e-10;
    if (i % 10 == 0 || i % 10 == 5) {
      ++endpoints;
      ok = ok && two_state_formula(lambda, mu, 1.0) == lambda &&
           two_state_formula(lambda, mu, 0.0) == mu;
    }
    if (!ok) ++r.failures;
    ++r.cases;
  }
  r.metrics = {{"max_abs_diff", worst}, {"endpoint_cases", endpoints}, {"tolerance", 1e-10}};
  r.pass = r.failures == 0;
  return r;
}

CriterionResult pure_argument(const AcceptanceOptions& o, const Counts& n) {
  CriterionResult r{3, "measure squared equals strength for a pure argument"};
  double worst_low = 0.0;
  double worst_high = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < n.c3_pairs; ++i) {
    Rng rng = stream(o, 3, i);
    const int d = 2 + i % 2;
    const DensityOperator a = random_density(d, uniform_int(rng, 1, d), rng);
    const PureState phi = random_pure_in(support(a).basis, rng);
    MeasureConfig cfg;
    cfg.seed = seed_for(o, 3, i);
    const MeasureResult m = example_measure(a, to_density(phi), cfg);
    const double s = strength(a, phi).value;
    const double v2 = m.value * m.value;
    worst_low = std::max(worst_low, s - v2);
    worst_high = std::max(worst_high, v2 - s);
    if (!(v2 >= s - 2e-3 && v2 <= s + 1e-9)) ++r.failures;
    ++r.cases;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.metrics = {{"max_shortfall", worst_low},
               {"max_excess", worst_high},
               {"restarts", MeasureConfig{}.restarts}};
  r.pass = r.failures == 0 && seconds < 300.0;
  return r;
}

struct SupportPair {
  DensityOperator a;
  DensityOperator b;
  bool disjoint;
};

std::vector<SupportPair> support_pairs(const AcceptanceOptions& o, const Counts& n) {
  std::vector<SupportPair> pairs;
  for (int i = 0; i < 2 * n.c4_pairs; ++i) {
    Rng rng = stream(o, 4, i);
    const int d = dim_in(o, i / 2);
    const Matrix u = random_unitary(d, rng);
    const bool disjoint = i % 2 == 0;
    if (disjoint) {
      const int ka = uniform_int(rng, 1, d - 1);
      const int kb = uniform_int(rng, 1, d - ka);
      DensityOperator a = random_density_in(u.leftCols(ka), ka, rng);
      DensityOperator b = random_density_in(u.middleCols(ka, kb), kb, rng);
      pairs.push_back({std::move(a), std::move(b), true});
    } else {
      // Shared column 0; the remaining columns may or may not overlap further.
      const int ka = uniform_int(rng, 1, d);
      const int kb = uniform_int(rng, 1, d);
      const Matrix vb = random_unitary(d, rng);
      Matrix bb(d, kb);
      bb.col(0) = u.col(0);
      for (int j = 1; j < kb; ++j) bb.col(j) = vb.col(j);
      const Matrix qb = Eigen::HouseholderQR<Matrix>(bb).householderQ() * Matrix::Identity(d, kb);
      DensityOperator a = random_density_in(u.leftCols(ka), ka, rng);
      DensityOperator b = random_density_in(qb, kb, rng);
      pairs.push_back({std::move(a), std::move(b), false});
    }
  }
  return pairs;
}

// y is the result for the swapped arguments, so its sides are exchanged.
bool mirrored(const MeasureResult& x, const MeasureResult& y) {
  if (x.value != y.value || x.residual != y.residual) return false;
  if (x.decomposition_a.weights != y.decomposition_b.weights) return false;
  if (x.decomposition_b.weights != y.decomposition_a.weights) return false;
  for (std::size_t k = 0; k < x.decomposition_a.pures.size(); ++k) {
    if (x.decomposition_a.pures[k].vector() != y.decomposition_b.pures[k].vector()) return false;
  }
  return true;
}

void support_criteria(const AcceptanceOptions& o, const Counts& n, CriterionResult& r4,
                      CriterionResult& r5) {
  r4 = CriterionResult{4, "compatibility iff intersecting supports"};
  r5 = CriterionResult{5, "measure symmetric in its arguments"};
  double worst_disjoint = 0.0;
  double min_positive = 1.0;
  double worst_residual = 0.0;
  int disjoint_failures = 0;
  int intersect_failures = 0;
  const std::vector<SupportPair> pairs = support_pairs(o, n);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const SupportPair& p = pairs[i];
    MeasureConfig cfg;
    cfg.restarts = kSupportRestarts;
    cfg.seed = seed_for(o, 4, i);
    bool ok = true;
    bool symmetric = false;
    try {
      const MeasureResult ab = measure_symmetric(p.a, p.b, cfg);
      const MeasureResult ba = measure_symmetric(p.b, p.a, cfg);
      symmetric = mirrored(ab, ba);
      const bool compatible = is_compatible(p.a, p.b);
      if (p.disjoint) {
        worst_disjoint = std::max(worst_disjoint, ab.value);
        ok = !compatible && ab.value <= 1e-6;
        if (!ok) ++disjoint_failures;
      } else {
        const double res_a = reconstruction_residual(ab.decomposition_a, p.a);
        const double res_b = reconstruction_residual(ab.decomposition_b, p.b);
        worst_residual = std::max({worst_residual, res_a, res_b});
        min_positive = std::min(min_positive, ab.value);
        ok = compatible && ab.value > 0.0 && res_a <= cfg.feas_tol && res_b <= cfg.feas_tol &&
             std::abs(certificate_value(ab.decomposition_a, ab.decomposition_b) - ab.value) <= 1e-12;
        if (!ok) ++intersect_failures;
      }
    } catch (const Error&) {
      ok = false;
      ++(p.disjoint ? disjoint_failures : intersect_failures);
    }
    ++r4.cases;
    ++r5.cases;
    if (!ok) ++r4.failures;
    if (!symmetric) ++r5.failures;
  }
  r4.metrics = {{"disjoint_pairs", n.c4_pairs},
                {"intersecting_pairs", n.c4_pairs},
                {"disjoint_failures", disjoint_failures},
                {"intersecting_failures", intersect_failures},
                {"max_disjoint_value", worst_disjoint},
                {"min_intersecting_value", min_positive},
                {"max_certificate_residual", worst_residual},
                {"restarts", kSupportRestarts}};
  r4.pass = r4.failures == 0;
  r5.metrics = {{"pairs", r5.cases}, {"asymmetric", r5.failures}};
  r5.pass = r5.failures == 0;
}

CriterionResult theorem_round_trip(const AcceptanceOptions& o, const Counts& n) {
  CriterionResult r{6, "symmetry round trip"};
  double worst_error = 0.0;
  double worst_overlap = 1.0;
  int flags_correct = 0;
  int anti = 0;
  for (int i = 0; i < n.c6_symmetries; ++i) {
    const int d = 2 + i % 7;
    const bool antiunitary = i % 2 == 1;
    anti += antiunitary ? 1 : 0;
    const SymmetryOp s = random_symmetry(d, antiunitary, seed_for(o, 6, i));
    bool ok = false;
    try {
      const VerifyResult v = verify_theorem(
          [&s](const DensityOperator& a) { return apply_symmetry(s, a); }, d, 8, seed_for(o, 60, i));
      const double overlap = phase_overlap(v.symmetry.u, s.u);
      const bool flag = v.symmetry.antiunitary == antiunitary;
      flags_correct += flag ? 1 : 0;
      worst_error = std::max(worst_error, v.max_error);
      worst_overlap = std::min(worst_overlap, overlap);
      ok = v.verdict && v.max_error <= 1e-8 && flag && overlap >= 1.0 - 1e-9;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) ++r.failures;
    ++r.cases;
  }
  r.metrics = {{"antiunitary", anti},
               {"flags_correct", flags_correct},
               {"max_error", worst_error},
               {"min_phase_overlap", worst_overlap}};
  r.pass = r.failures == 0;
  return r;
}

CriterionResult adversarial_rejection(const AcceptanceOptions& o) {
  CriterionResult r{7, "adversarial rejection"};
  json outcomes = json::array();
  for (const AdversarialCase& c : adversarial_suite(o.seed)) {
    std::string outcome;
    try {
      const VerifyResult v = verify_theorem(c.transform, c.dim, 8, seed_for(o, 7, r.cases));
      outcome = v.verdict ? "accepted" : "verdict false";
    } catch (const NotASymmetry& e) {
      outcome = "NotASymmetry at " + e.probe();
    } catch (const Error& e) {
      outcome = std::string("error ") + e.kind();
    }
    const bool rejected = outcome == "verdict false" || outcome.rfind("NotASymmetry", 0) == 0;
    if (!rejected) ++r.failures;
    ++r.cases;
    outcomes.push_back({{"case", c.name}, {"outcome", outcome}});
  }
  r.metrics = {{"outcomes", outcomes}};
  r.pass = r.failures == 0 && r.cases >= 20;
  return r;
}

CriterionResult rank_detection(const AcceptanceOptions& o, const Counts& n) {
  CriterionResult r{8, "rank detection through compatibility"};
  for (int i = 0; i < n.c8_states; ++i) {
    Rng rng = stream(o, 8, i);
    const int d = 2 + i % 4;
    const int k = 1 + (i / 4) % d;
    const DensityOperator a = random_density(d, k, rng);
    const int detected = rank_via_compatibility(a, d * d, seed_for(o, 80, i));
    if (detected != a.numerical_rank() || detected != k) ++r.failures;
    ++r.cases;
  }
  r.metrics = {{"matched", r.cases - r.failures}};
  r.pass = r.failures == 0;
  return r;
}

CriterionResult invariance(const AcceptanceOptions& o, const Counts& n) {
  CriterionResult r{9, "invariance under symmetries"};
  double worst_strength = 0.0;
  double worst_transition = 0.0;
  int compat_mismatch = 0;
  for (int i = 0; i < n.c9_cases; ++i) {
    Rng rng = stream(o, 9, i);
    const int d = dim_in(o, i);
    const SymmetryOp s = random_symmetry(d, i % 2 == 1, seed_for(o, 90, i));
    const DensityOperator t = random_density(d, uniform_int(rng, 1, d), rng);
    const PureState phi = i % 3 == 0 ? random_pure(d, rng) : random_pure_in(support(t).basis, rng);
    const PureState psi = random_pure(d, rng);
    const DensityOperator b = i % 2 == 0 ? to_density(random_pure_in(support(t).basis, rng))
                                         : random_density(d, uniform_int(rng, 1, d - 1), rng);
    const double ds =
        std::abs(strength(t, phi).value - strength(apply_symmetry(s, t), apply_symmetry(s, phi)).value);
    const double dt = std::abs(transition_prob(phi, psi) -
                               transition_prob(apply_symmetry(s, phi), apply_symmetry(s, psi)));
    const bool dc = is_compatible(t, b) != is_compatible(apply_symmetry(s, t), apply_symmetry(s, b));
    worst_strength = std::max(worst_strength, ds);
    worst_transition = std::max(worst_transition, dt);
    compat_mismatch += dc ? 1 : 0;
    if (!(ds <= 1e-10 && dt <= 1e-10) || dc) ++r.failures;
    ++r.cases;
  }
  r.metrics = {{"max_strength_diff", worst_strength},
               {"max_transition_diff", worst_transition},
               {"compatibility_mismatches", compat_mismatch}};
  r.pass = r.failures == 0;
  return r;
}

template <typename F>
CriterionResult timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = f();
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_criteria(const AcceptanceOptions& o, std::ostream* log) {
  const Counts n = counts_for(o.quick);
  std::vector<CriterionResult> out;
  const auto emit = [&](CriterionResult r) {
    if (log != nullptr) *log << format_line(r) << std::endl;
    out.push_back(std::move(r));
  };
  emit(timed([&] { return strength_oracle_agreement(o, n); }));
  emit(timed([&] { return two_level_closed_form(o, n); }));
  emit(timed([&] { return pure_argument(o, n); }));
  CriterionResult r4;
  CriterionResult r5;
  const auto start = std::chrono::steady_clock::now();
  support_criteria(o, n, r4, r5);
  r4.elapsed_ms = r5.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit(r4);
  emit(r5);
  emit(timed([&] { return theorem_round_trip(o, n); }));
  emit(timed([&] { return adversarial_rejection(o); }));
  emit(timed([&] { return rank_detection(o, n); }));
  emit(timed([&] { return invariance(o, n); }));
  return out;
}

json criteria_payload(const std::vector<CriterionResult>& criteria) {
  json arr = json::array();
  for (const CriterionResult& c : criteria) {
    arr.push_back({{"id", c.id},
                   {"name", c.name},
                   {"pass", c.pass},
                   {"cases", c.cases},
                   {"failures", c.failures},
                   {"metrics", c.metrics}});
  }
  return arr;
}

}  // namespace

std::vector<AdversarialCase> adversarial_suite(std::uint64_t seed) {
  std::vector<AdversarialCase> suite;
  const auto sym = [&](int d, bool anti, std::uint64_t k) {
    return random_symmetry(d, anti, derive_seed(seed, 7000 + k));
  };

  // Symmetry on pure states, plus a transpose on everything of rank >= 2.
  for (int d = 2; d <= 6; ++d) {
    const SymmetryOp s = sym(d, d % 2 == 1, d);
    suite.push_back({"transpose on mixed states, dim " + std::to_string(d), d,
                     [s](const DensityOperator& a) {
                       const DensityOperator b = apply_symmetry(s, a);
                       return b.numerical_rank() >= 2 ? validate_density(b.matrix().transpose()) : b;
                     }});
  }
  // Conjugate only the leading eigenvector; pure states see an antiunitary map.
  for (int d = 2; d <= 6; ++d) {
    suite.push_back({"conjugated leading eigenvector, dim " + std::to_string(d), d,
                     [](const DensityOperator& a) {
                       const Matrix& v = a.eigenvectors();
                       const Vector lead = v.col(0).conjugate();
                       Matrix m = a.eigenvalues()(0) * lead * lead.adjoint();
                       for (int i = 1; i < a.dim(); ++i) {
                         m += a.eigenvalues()(i) * v.col(i) * v.col(i).adjoint();
                       }
                       return validate_density(hermitian_part(m));
                     }});
  }
  // Spectrum kept, eigenvectors forgotten.
  for (int d = 2; d <= 4; ++d) {
    suite.push_back({"diagonal of eigenvalues, dim " + std::to_string(d), d,
                     [](const DensityOperator& a) {
                       return validate_density(a.eigenvalues().cast<cplx>().asDiagonal().toDenseMatrix());
                     }});
  }
  // The complex probe is sent to the wrong branch.
  for (int d = 2; d <= 4; ++d) {
    const SymmetryOp s = sym(d, false, 10 + d);
    const Probe probe = wigner_probes(d).back();
    suite.push_back({"phase-broken complex probe, dim " + std::to_string(d), d,
                     [s, probe](const DensityOperator& a) {
                       if ((a.matrix() - probe.state.projection()).norm() <= 1e-12) {
                         return apply_symmetry(s, to_density(PureState(probe.state.vector().conjugate())));
                       }
                       return apply_symmetry(s, a);
                     }});
  }
  // A single two-level state has its weights swapped.
  for (int d = 2; d <= 5; ++d) {
    const SymmetryOp s = sym(d, d % 2 == 0, 20 + d);
    const Matrix p1 = Vector::Unit(d, 0) * Vector::Unit(d, 0).adjoint();
    const Matrix p2 = Vector::Unit(d, 1) * Vector::Unit(d, 1).adjoint();
    const Matrix target = 0.4 * p1 + 0.6 * p2;
    const Matrix swapped = 0.6 * p1 + 0.4 * p2;
    suite.push_back({"single tampered state, dim " + std::to_string(d), d,
                     [s, target, swapped](const DensityOperator& a) {
                       if ((a.matrix() - target).norm() <= 1e-12) {
                         return apply_symmetry(s, validate_density(swapped));
                       }
                       return apply_symmetry(s, a);
                     }});
  }
  // A different rotation for mixed states.
  for (int d = 3; d <= 4; ++d) {
    const SymmetryOp s = sym(d, false, 30 + d);
    const SymmetryOp t = sym(d, false, 40 + d);
    suite.push_back({"rank-dependent rotation, dim " + std::to_string(d), d,
                     [s, t](const DensityOperator& a) {
                       return a.numerical_rank() >= 2 ? apply_symmetry(s, apply_symmetry(t, a))
                                                      : apply_symmetry(s, a);
                     }});
  }
  return suite;
}

bool AcceptanceReport::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

json AcceptanceReport::payload(const AcceptanceOptions& options) const {
  return {{"seed", options.seed},
          {"dims", {options.dim_lo, options.dim_hi}},
          {"quick", options.quick},
          {"criteria", criteria_payload(criteria)},
          {"all_pass", all_pass()}};
}

std::string format_line(const CriterionResult& c) {
  std::ostringstream os;
  os << (c.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << ": " << c.cases
     << " cases, " << c.failures << " failures";
  os.precision(3);
  os << " (" << std::fixed << c.elapsed_ms / 1000.0 << " s)";
  return os.str();
}

AcceptanceReport run_acceptance(const AcceptanceOptions& options, std::ostream* log) {
  if (options.dim_lo < 2 || options.dim_hi < options.dim_lo || options.dim_hi > 8) {
    throw InvalidArgument("dimension range must satisfy 2 <= lo <= hi <= 8");
  }
  AcceptanceReport report;
  report.criteria = run_criteria(options, log);

  const auto start = std::chrono::steady_clock::now();
  const std::string first = criteria_payload(report.criteria).dump();
  const std::string second = criteria_payload(run_criteria(options, nullptr)).dump();
  CriterionResult r{10, "determinism of the result payload"};
  r.cases = 1;
  r.failures = first == second ? 0 : 1;
  r.pass = r.failures == 0;
  r.metrics = {{"payload_bytes", first.size()}, {"identical", first == second}};
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (log != nullptr) *log << format_line(r) << std::endl;
  report.criteria.push_back(std::move(r));
  return report;
}

}  // namespace qcompat
