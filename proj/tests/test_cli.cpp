#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "qcompat/cli.hpp"
#include "qcompat/compat_measure.hpp"
#include "qcompat/io.hpp"
#include "qcompat/random.hpp"
#include "qcompat/strength.hpp"

using namespace qcompat;
using nlohmann::json;

namespace {

struct Fixtures {
  std::filesystem::path dir;

  Fixtures() {
    dir = std::filesystem::temp_directory_path() / "qcompat_cli_test";
    std::filesystem::create_directories(dir);
  }
  ~Fixtures() { std::filesystem::remove_all(dir); }

  std::string write(const std::string& name, const json& doc) const {
    const std::string path = (dir / name).string();
    io::write_file(path, doc.dump());
    return path;
  }
};

struct Outcome {
  int code;
  json report;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  json report = out.str().empty() ? json() : json::parse(out.str());
  return {code, report};
}

json matrix(const Matrix& m) { return io::matrix_to_json(m); }

PureStateMap map_of(const SymmetryOp& s, int extra, std::uint64_t seed) {
  PureStateMap map(s.dim());
  for (const Probe& p : wigner_probes(s.dim())) map.add(p.state, apply_symmetry(s, p.state));
  Rng rng = make_rng(seed);
  for (int i = 0; i < extra; ++i) {
    const PureState p = random_pure(s.dim(), rng);
    map.add(p, apply_symmetry(s, p));
  }
  return map;
}

}  // namespace

TEST_CASE("cli strength") {
  const Fixtures fx;
  const std::string mixed = fx.write("mixed.json", matrix(Matrix::Identity(4, 4) / 4.0));
  const PureState phi = random_pure(4, 3);
  const std::string vec = fx.write("vec.json", io::vector_to_json(phi.vector()));
  const std::string own = fx.write("own.json", matrix(phi.projection()));

  Outcome r = run({"strength", "--state", mixed, "--vector", vec});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["value"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.report["inputs"]["state"]["sha256"].get<std::string>().size() == 64);
  CHECK(r.report["config"]["tol_rank"].get<double>() == 1e-10);
  CHECK(r.report["config"]["tol_mem"].get<double>() == 1e-8);

  r = run({"strength", "--state", own, "--vector", vec});
  CHECK(r.report["result"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  const std::string rnd = fx.write("rnd.json", matrix(random_density(4, 3, 9).matrix()));
  r = run({"strength", "--state", rnd, "--vector", vec, "--oracle"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["oracle_diff"].get<double>() <= 1e-7);
}

TEST_CASE("cli compat and measure") {
  const Fixtures fx;
  const std::string e1 = fx.write("e1.json", matrix(Vector::Unit(3, 0) * Vector::Unit(3, 0).adjoint()));
  const std::string e2 = fx.write("e2.json", matrix(Vector::Unit(3, 1) * Vector::Unit(3, 1).adjoint()));
  Outcome r = run({"compat", "--a", e1, "--b", e2});
  CHECK(r.code == 0);
  CHECK_FALSE(r.report["result"]["compatible"].get<bool>());
  r = run({"measure", "--a", e1, "--b", e2});
  CHECK(r.report["result"]["value"].get<double>() == 0.0);

  const DensityOperator a = random_density(3, 3, 2);
  const std::string sa = fx.write("a.json", matrix(a.matrix()));
  r = run({"measure", "--a", sa, "--b", sa, "--restarts", "3", "--seed", "4"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.report["config"]["components"].get<int>() == 6);
  CHECK(r.report["config"]["seed"].get<int>() == 4);
  CHECK(r.report["result"]["decomposition_a"]["weights"].size() == 12);

  // value^2 of (A, P) against the strength of A along P
  Rng rng = make_rng(5);
  const PureState p = random_pure_in(support(a).basis, rng);
  const std::string sp = fx.write("p.json", matrix(p.projection()));
  const std::string vp = fx.write("vp.json", io::vector_to_json(p.vector()));
  const double value = run({"measure", "--a", sa, "--b", sp}).report["result"]["value"].get<double>();
  const double s = run({"strength", "--state", sa, "--vector", vp}).report["result"]["value"].get<double>();
  CHECK(std::abs(value * value - s) <= 2e-3);

  r = run({"measure", "--a", sa, "--b", sa, "--restarts", "1", "--feas-tol", "1e-300"});
  CHECK(r.code == cli::kInfeasible);
  CHECK(r.report["error"]["kind"] == "Infeasible");
}

TEST_CASE("cli reconstruct and verify") {
  const Fixtures fx;
  const std::string id_map = fx.write("id.json", io::map_to_json(map_of(SymmetryOp::identity(3), 0, 1)));
  Outcome r = run({"reconstruct", "--map", id_map});
  CHECK(r.code == 0);
  CHECK_FALSE(r.report["result"]["antiunitary"].get<bool>());
  CHECK((io::matrix_from_json(r.report["result"]["symmetry"]) - Matrix::Identity(3, 3)).norm() <= 1e-12);

  const SymmetryOp s = random_symmetry(4, true, 12);
  const std::string sym = fx.write("sym.json", io::symmetry_to_json(s));
  r = run({"verify", "--symmetry", sym, "--n-mixed", "10", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["verdict"].get<bool>());
  CHECK(r.report["result"]["flag_matches"].get<bool>());
  CHECK(r.report["result"]["max_error"].get<double>() <= 1e-8);

  const std::string sym_map = fx.write("sym_map.json", io::map_to_json(map_of(s, 3, 2)));
  r = run({"verify", "--map", sym_map});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["symmetry"]["antiunitary"].get<bool>());

  // e2 is sent onto the image of e1: the failing probe pair is named.
  PureStateMap bad(3);
  for (const Probe& p : wigner_probes(3)) {
    bad.add(p.state, p.name == "e2" ? PureState(Vector::Unit(3, 0)) : p.state);
  }
  const std::string bad_map = fx.write("bad.json", io::map_to_json(bad));
  r = run({"reconstruct", "--map", bad_map});
  CHECK(r.code == cli::kNotASymmetry);
  CHECK(r.report["error"]["probe"].get<std::string>().find("e2") != std::string::npos);
  CHECK(run({"verify", "--map", bad_map}).code == cli::kNotASymmetry);

  PureStateMap partial(3);
  partial.add(PureState(Vector::Unit(3, 0)), PureState(Vector::Unit(3, 0)));
  CHECK(run({"reconstruct", "--map", fx.write("partial.json", io::map_to_json(partial))}).code ==
        cli::kValidationError);
}

TEST_CASE("cli error exits") {
  const Fixtures fx;
  const std::string notes = fx.write("notes.json", json{{"dim", 2}});
  const std::string half = fx.write("half.json", matrix(Matrix::Identity(2, 2) / 2.0));
  const std::string heavy = fx.write("heavy.json", matrix(Matrix::Identity(2, 2)));
  CHECK(run({"compat", "--a", notes, "--b", half}).code == cli::kIoError);
  CHECK(run({"compat", "--a", (fx.dir / "missing.json").string(), "--b", half}).code == cli::kIoError);
  const Outcome r = run({"compat", "--a", heavy, "--b", half});
  CHECK(r.code == cli::kValidationError);
  CHECK(r.report["error"]["kind"] == "TraceNotOne");
  CHECK(run({"measure", "--a", half, "--b", half, "--seed", "-1"}).code == cli::kIoError);
  CHECK(run({"frobnicate"}).code == cli::kIoError);
  CHECK(run({"verify", "--symmetry", half, "--map", half}).code == cli::kIoError);
}

TEST_CASE("cli generate writes loadable files") {
  const Fixtures fx;
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(cli::run({"generate", "--kind", "state", "--dim", "3", "--rank", "2", "--seed", "1"}, out,
                   err) == 0);
  const DensityOperator a = validate_density(io::matrix_from_json(json::parse(out.str())));
  CHECK(a.numerical_rank() == 2);

  std::ostringstream map_out;
  REQUIRE(cli::run({"generate", "--kind", "map", "--dim", "3", "--antiunitary", "--seed", "2"},
                   map_out, err) == 0);
  const std::string path = fx.write("gen_map.json", json::parse(map_out.str()));
  const Outcome r = run({"reconstruct", "--map", path});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["antiunitary"].get<bool>());
}

TEST_CASE("cli verify needs a symmetry or a map") {
  CHECK(run({"verify", "--n-mixed", "3"}).code == cli::kIoError);
}

TEST_CASE("cli takes the default seed from QCOMPAT_SEED") {
  const Fixtures fx;
  const std::string half = fx.write("half.json", matrix(Matrix::Identity(2, 2) / 2.0));
  setenv("QCOMPAT_SEED", "17", 1);
  const Outcome env = run({"measure", "--a", half, "--b", half, "--restarts", "1"});
  const Outcome flag = run({"measure", "--a", half, "--b", half, "--restarts", "1", "--seed", "3"});
  unsetenv("QCOMPAT_SEED");
  CHECK(env.report["config"]["seed"].get<int>() == 17);
  CHECK(flag.report["config"]["seed"].get<int>() == 3);
}
