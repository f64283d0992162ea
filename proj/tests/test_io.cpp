#include "doctest.h"

#include <filesystem>

#include "qcompat/io.hpp"
#include "qcompat/random.hpp"

using namespace qcompat;
using nlohmann::json;

TEST_CASE("io: matrices, vectors and symmetries round-trip exactly") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int d = 1 + static_cast<int>(seed % 7);
    const Matrix m = random_density(d, 1 + static_cast<int>(seed % d), seed).matrix();
    CHECK(io::matrix_from_json(json::parse(io::matrix_to_json(m).dump())) == m);

    const Vector v = random_pure(d, seed).vector();
    CHECK(io::vector_from_json(json::parse(io::vector_to_json(v).dump())) == v);

    const SymmetryOp s = random_symmetry(d, seed % 2 == 0, seed);
    const SymmetryOp back = io::symmetry_from_json(json::parse(io::symmetry_to_json(s).dump()));
    CHECK(back.u == s.u);
    CHECK(back.antiunitary == s.antiunitary);
  }
}

TEST_CASE("io: maps round-trip") {
  const SymmetryOp s = random_symmetry(3, true, 4);
  PureStateMap map(3);
  for (const Probe& p : wigner_probes(3)) map.add(p.state, apply_symmetry(s, p.state));
  const PureStateMap back = io::map_from_json(json::parse(io::map_to_json(map).dump()));
  REQUIRE(back.size() == map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    CHECK(projection_distance(back.pairs()[i].first, map.pairs()[i].first) <= 1e-15);
    CHECK(projection_distance(back.pairs()[i].second, map.pairs()[i].second) <= 1e-15);
  }
}

TEST_CASE("io: vectors in maps are normalized on load") {
  const json doc = json::parse(R"({"dim": 2, "pairs": [[{"dim": 2, "entries": [[2, 0], [0, 0]]},
                                                         {"dim": 2, "entries": [[0, 0], [0, 3]]}]]})");
  const PureStateMap map = io::map_from_json(doc);
  CHECK(map.pairs()[0].first.vector().norm() == doctest::Approx(1.0));
}

TEST_CASE("io: malformed documents") {
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"entries": []})")), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"dim": 2, "entries": [[1, 0]]})")), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"dim": 0, "entries": []})")), ParseError);
  CHECK_THROWS_AS(io::vector_from_json(json::parse(R"({"dim": 1, "entries": [["a", 0]]})")), ParseError);
  CHECK_THROWS_AS(io::vector_from_json(json::parse(R"({"dim": 1, "entries": [[1, 0, 0]]})")), ParseError);
  CHECK_THROWS_AS(io::symmetry_from_json(json::parse(R"({"dim": 1, "entries": [[1, 0]], "antiunitary": 1})")),
                  ParseError);
  CHECK_THROWS_AS(io::map_from_json(json::parse(R"({"dim": 2, "pairs": [[{"dim": 3, "entries": [[1,0],[0,0],[0,0]]},
                                                                          {"dim": 3, "entries": [[1,0],[0,0],[0,0]]}]]})")),
                  ParseError);
  CHECK_THROWS_AS(io::load_json("/nonexistent/qcompat.json"), ParseError);
}

TEST_CASE("io: file digest") {
  const auto path = std::filesystem::temp_directory_path() / "qcompat_digest_test.txt";
  io::write_file(path.string(), "abc");
  CHECK(io::file_digest(path.string()) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(path);
}
