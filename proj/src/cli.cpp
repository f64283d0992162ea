#include "qcompat/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <optional>
#include <regex>

#include "CLI11.hpp"

#include "qcompat/acceptance.hpp"
#include "qcompat/compat_measure.hpp"
#include "qcompat/io.hpp"
#include "qcompat/preserver.hpp"
#include "qcompat/random.hpp"
#include "qcompat/strength.hpp"

namespace qcompat::cli {

using nlohmann::json;

namespace {

struct Context {
  json inputs = json::object();
  json config = json::object();
};

json load_input(Context& ctx, const std::string& name, const std::string& path) {
  json doc = io::load_json(path);
  ctx.inputs[name] = {{"path", path}, {"sha256", io::file_digest(path)}};
  return doc;
}

// Malformed numeric content inside an otherwise valid document is a parse error.
template <typename F>
auto parse_field(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(what + ": " + e.what());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  if (!std::regex_match(text, std::regex("[0-9]+"))) {
    throw ParseError(origin + " must be a nonnegative integer, got \"" + text + "\"");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ParseError(origin + " is out of range: " + text);
  }
}

std::uint64_t effective_seed(const std::optional<std::string>& flag) {
  if (flag) return parse_seed(*flag, "--seed");
  if (const char* env = std::getenv("QCOMPAT_SEED")) return parse_seed(env, "QCOMPAT_SEED");
  return 0;
}

json tolerances_json(const Tolerances& t) {
  return {{"tol_rank", t.rank}, {"tol_mem", t.membership}};
}

DensityOperator load_state(Context& ctx, const std::string& name, const std::string& path,
                           const Tolerances& tol) {
  const json doc = load_input(ctx, name, path);
  return validate_density(parse_field(path, [&] { return io::matrix_from_json(doc); }), tol.rank);
}

struct StrengthFlags {
  std::string state;
  std::string vector;
  Tolerances tol;
  bool oracle = false;
};

json cmd_strength(Context& ctx, const StrengthFlags& f) {
  ctx.config = tolerances_json(f.tol);
  ctx.config["oracle"] = f.oracle;
  const json state_doc = load_input(ctx, "state", f.state);
  const json vector_doc = load_input(ctx, "vector", f.vector);
  const Effect t =
      validate_effect(parse_field(f.state, [&] { return io::matrix_from_json(state_doc); }), f.tol.rank);
  const PureState phi =
      PureState::normalized(parse_field(f.vector, [&] { return io::vector_from_json(vector_doc); }));
  const StrengthResult s = strength(t, phi, f.tol);
  json result = {{"value", s.value},
                 {"in_range", s.in_range},
                 {"near_boundary", s.near_boundary},
                 {"kernel_weight", s.kernel_weight}};
  if (f.oracle) {
    const double o = strength_oracle(t, phi);
    result["oracle"] = o;
    result["oracle_diff"] = std::abs(o - s.value);
  }
  return result;
}

struct PairFlags {
  std::string a;
  std::string b;
  Tolerances tol;
};

json cmd_compat(Context& ctx, const PairFlags& f) {
  ctx.config = tolerances_json(f.tol);
  const DensityOperator a = load_state(ctx, "a", f.a, f.tol);
  const DensityOperator b = load_state(ctx, "b", f.b, f.tol);
  return {{"compatible", is_compatible(a, b, f.tol)},
          {"intersection_dim", support_intersection(a, b, f.tol).dim()},
          {"rank_a", a.numerical_rank()},
          {"rank_b", b.numerical_rank()}};
}

struct MeasureFlags {
  PairFlags pair;
  int components = 0;
  int restarts = MeasureConfig{}.restarts;
  std::optional<std::string> seed;
  double feas_tol = MeasureConfig{}.feas_tol;
};

json cmd_measure(Context& ctx, const MeasureFlags& f) {
  MeasureConfig cfg;
  cfg.restarts = f.restarts;
  cfg.seed = effective_seed(f.seed);
  cfg.feas_tol = f.feas_tol;
  cfg.tol = f.pair.tol;
  ctx.config = tolerances_json(cfg.tol);
  ctx.config["restarts"] = cfg.restarts;
  ctx.config["seed"] = cfg.seed;
  ctx.config["feas_tol"] = cfg.feas_tol;
  ctx.config["analytic_seed"] = cfg.analytic_seed;
  const DensityOperator a = load_state(ctx, "a", f.pair.a, cfg.tol);
  const DensityOperator b = load_state(ctx, "b", f.pair.b, cfg.tol);
  cfg.components = f.components > 0 ? f.components : 2 * a.dim();
  ctx.config["components"] = cfg.components;
  const MeasureResult m = example_measure(a, b, cfg);
  return {{"value", m.value},
          {"upper_bound", measure_upper_bound(a, b, cfg.tol)},
          {"residual", m.residual},
          {"restarts_used", m.restarts_used},
          {"best_restart", m.best_restart},
          {"intersection_dim", m.intersection_dim},
          {"decomposition_a", io::decomposition_to_json(m.decomposition_a)},
          {"decomposition_b", io::decomposition_to_json(m.decomposition_b)}};
}

PureStateMap load_map(Context& ctx, const std::string& path) {
  const json doc = load_input(ctx, "map", path);
  return parse_field(path, [&] { return io::map_from_json(doc); });
}

json cmd_reconstruct(Context& ctx, const std::string& map_path, double tol) {
  ctx.config = {{"tol", tol}};
  const PureStateMap map = load_map(ctx, map_path);
  const SymmetryOp s = wigner_reconstruct(map, map.dim(), tol);
  return {{"symmetry", io::symmetry_to_json(s)}, {"antiunitary", s.antiunitary}};
}

struct VerifyFlags {
  std::string symmetry;
  std::string map;
  int n_mixed = 20;
  std::optional<std::string> seed;
  double tol = kDefaultSymmetryTol;
};

json verify_json(const VerifyResult& v) {
  return {{"verdict", v.verdict},
          {"max_error", v.max_error},
          {"mixed_checked", v.mixed_checked},
          {"strengths_agree", v.strengths_agree},
          {"first_failure", v.first_failure},
          {"symmetry", io::symmetry_to_json(v.symmetry)}};
}

json cmd_verify(Context& ctx, const VerifyFlags& f) {
  const std::uint64_t seed = effective_seed(f.seed);
  ctx.config = {{"tol", f.tol}, {"n_mixed", f.n_mixed}, {"seed", seed}};
  if (!f.map.empty()) {
    // A stored map only carries pure states, so mixed samples are not available.
    ctx.config["n_mixed"] = 0;
    return verify_json(verify_map(load_map(ctx, f.map), f.tol));
  }
  const json doc = load_input(ctx, "symmetry", f.symmetry);
  const SymmetryOp s = parse_field(f.symmetry, [&] { return io::symmetry_from_json(doc); });
  check_unitary(s);
  const VerifyResult v = verify_theorem(
      [&s](const DensityOperator& a) { return apply_symmetry(s, a); }, s.dim(), f.n_mixed, seed,
      f.tol);
  json result = verify_json(v);
  result["flag_matches"] = v.symmetry.antiunitary == s.antiunitary;
  result["phase_overlap"] = phase_overlap(v.symmetry.u, s.u);
  return result;
}

struct SelftestFlags {
  std::optional<std::string> seed;
  std::string dims = "2..6";
  bool quick = false;
};

json cmd_selftest(Context& ctx, const SelftestFlags& f, std::ostream& err, bool& passed) {
  AcceptanceOptions o;
  o.seed = effective_seed(f.seed);
  o.quick = f.quick;
  std::smatch m;
  if (!std::regex_match(f.dims, m, std::regex("([0-9]+)\\.\\.([0-9]+)"))) {
    throw InvalidArgument("--dims must look like LO..HI, got \"" + f.dims + "\"");
  }
  o.dim_lo = std::stoi(m[1]);
  o.dim_hi = std::stoi(m[2]);
  ctx.config = {{"seed", o.seed}, {"dims", f.dims}, {"quick", o.quick}};
  const AcceptanceReport report = run_acceptance(o, &err);
  passed = report.all_pass();
  return report.payload(o);
}

struct GenerateFlags {
  std::string kind;
  int dim = 2;
  int rank = 0;
  bool antiunitary = false;
  int extra_rays = 2;
  std::optional<std::string> seed;
};

json cmd_generate(const GenerateFlags& f) {
  const std::uint64_t seed = effective_seed(f.seed);
  if (f.kind == "state") {
    return io::matrix_to_json(random_density(f.dim, f.rank > 0 ? f.rank : f.dim, seed).matrix());
  }
  if (f.kind == "vector") return io::vector_to_json(random_pure(f.dim, seed).vector());
  const SymmetryOp s = random_symmetry(f.dim, f.antiunitary, seed);
  if (f.kind == "symmetry") return io::symmetry_to_json(s);
  PureStateMap map(f.dim);
  for (const Probe& p : wigner_probes(f.dim)) map.add(p.state, apply_symmetry(s, p.state));
  Rng rng = make_rng(derive_seed(seed, 1));
  for (int i = 0; i < f.extra_rays; ++i) {
    const PureState p = random_pure(f.dim, rng);
    map.add(p, apply_symmetry(s, p));
  }
  return io::map_to_json(map);
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e) != nullptr) return kIoError;
  if (dynamic_cast<const Infeasible*>(&e) != nullptr) return kInfeasible;
  if (dynamic_cast<const NotASymmetry*>(&e) != nullptr) return kNotASymmetry;
  return kValidationError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compatibility of quantum states and the symmetries preserving it", "qcompat"};
  app.require_subcommand(1, 1);

  StrengthFlags sf;
  CLI::App* strength_cmd = app.add_subcommand("strength", "strength of a state or effect along a ray");
  strength_cmd->add_option("--state", sf.state, "state or effect matrix file")->required();
  strength_cmd->add_option("--vector", sf.vector, "vector file")->required();
  strength_cmd->add_option("--tol-rank", sf.tol.rank, "relative eigenvalue cut-off");
  strength_cmd->add_option("--tol-mem", sf.tol.membership, "range membership tolerance");
  strength_cmd->add_flag("--oracle", sf.oracle, "cross-check with the bisection oracle");

  PairFlags cf;
  CLI::App* compat_cmd = app.add_subcommand("compat", "whether two states have intersecting supports");
  compat_cmd->add_option("--a", cf.a, "first state file")->required();
  compat_cmd->add_option("--b", cf.b, "second state file")->required();
  compat_cmd->add_option("--tol-rank", cf.tol.rank, "relative eigenvalue cut-off");

  MeasureFlags mf;
  CLI::App* measure_cmd = app.add_subcommand("measure", "certified lower bound on the compatibility measure");
  measure_cmd->add_option("--a", mf.pair.a, "first state file")->required();
  measure_cmd->add_option("--b", mf.pair.b, "second state file")->required();
  measure_cmd->add_option("--components", mf.components, "shared pure states (default 2*dim)");
  measure_cmd->add_option("--restarts", mf.restarts, "random restarts");
  measure_cmd->add_option("--seed", mf.seed, "seed (default $QCOMPAT_SEED or 0)");
  measure_cmd->add_option("--feas-tol", mf.feas_tol, "Frobenius feasibility tolerance");
  measure_cmd->add_option("--tol-rank", mf.pair.tol.rank, "relative eigenvalue cut-off");

  std::string map_path;
  double reconstruct_tol = kDefaultSymmetryTol;
  CLI::App* reconstruct_cmd = app.add_subcommand("reconstruct", "recover U from a pure-state map");
  reconstruct_cmd->add_option("--map", map_path, "map file")->required();
  reconstruct_cmd->add_option("--tol", reconstruct_tol, "transition probability tolerance");

  VerifyFlags vf;
  CLI::App* verify_cmd = app.add_subcommand("verify", "check that a transform acts as A -> U A U^*");
  auto* sym_opt = verify_cmd->add_option("--symmetry", vf.symmetry, "symmetry file");
  auto* map_opt = verify_cmd->add_option("--map", vf.map, "map file (pure states only)");
  sym_opt->excludes(map_opt);
  verify_cmd->add_option("--n-mixed", vf.n_mixed, "random mixed states to compare");
  verify_cmd->add_option("--seed", vf.seed, "seed (default $QCOMPAT_SEED or 0)");
  verify_cmd->add_option("--tol", vf.tol, "Frobenius tolerance");

  SelftestFlags tf;
  CLI::App* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  selftest_cmd->add_option("--seed", tf.seed, "seed (default $QCOMPAT_SEED or 0)");
  selftest_cmd->add_option("--dims", tf.dims, "dimension range LO..HI for free-dimension criteria");
  selftest_cmd->add_flag("--quick", tf.quick, "reduced sample counts");

  GenerateFlags gf;
  CLI::App* generate_cmd = app.add_subcommand("generate", "print a seeded random input file");
  generate_cmd->add_option("--kind", gf.kind, "state, vector, symmetry or map")
      ->required()
      ->check(CLI::IsMember({"state", "vector", "symmetry", "map"}));
  generate_cmd->add_option("--dim", gf.dim, "dimension")->check(CLI::Range(1, 64));
  generate_cmd->add_option("--rank", gf.rank, "state rank (default dim)");
  generate_cmd->add_flag("--antiunitary", gf.antiunitary, "antiunitary symmetry or map");
  generate_cmd->add_option("--extra-rays", gf.extra_rays, "random rays added to a map")
      ->check(CLI::NonNegativeNumber);
  generate_cmd->add_option("--seed", gf.seed, "seed (default $QCOMPAT_SEED or 0)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "qcompat: " << e.what() << "\n";
    return kIoError;
  }
  if (verify_cmd->parsed() && sym_opt->count() == 0 && map_opt->count() == 0) {
    err << "qcompat verify: one of --symmetry or --map is required\n";
    return kIoError;
  }

  const CLI::App* cmd = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };

  Context ctx;
  json report = {{"command", cmd->get_name()}};
  int code = kOk;
  try {
    json result;
    if (cmd == strength_cmd) {
      result = cmd_strength(ctx, sf);
    } else if (cmd == compat_cmd) {
      result = cmd_compat(ctx, cf);
    } else if (cmd == measure_cmd) {
      result = cmd_measure(ctx, mf);
    } else if (cmd == reconstruct_cmd) {
      result = cmd_reconstruct(ctx, map_path, reconstruct_tol);
    } else if (cmd == verify_cmd) {
      result = cmd_verify(ctx, vf);
    } else if (cmd == selftest_cmd) {
      bool passed = false;
      result = cmd_selftest(ctx, tf, err, passed);
      if (!passed) code = kSelftestFailed;
    } else {
      out << cmd_generate(gf).dump(2) << "\n";
      return kOk;
    }
    report["result"] = std::move(result);
  } catch (const Error& e) {
    json error = {{"kind", e.kind()}, {"message", e.what()}};
    if (const auto* n = dynamic_cast<const NotASymmetry*>(&e)) error["probe"] = n->probe();
    report["error"] = std::move(error);
    code = exit_code_for(e);
    err << "qcompat " << cmd->get_name() << ": " << e.kind() << ": " << e.what() << "\n";
  }
  report["inputs"] = ctx.inputs;
  report["config"] = ctx.config;
  report["elapsed_ms"] = elapsed_ms();
  out << report.dump(2) << "\n";
  return code;
}

}  // namespace qcompat::cli
