#include "qcompat/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace qcompat::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << contents;
}

json load_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string file_digest(const std::string& path) {
  const std::string bytes = read_file(path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw ParseError("cannot hash " + path);
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

namespace {

int read_dim(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.at("dim").is_number_integer()) {
    throw ParseError("expected an object with integer field \"dim\"");
  }
  const int dim = j.at("dim").get<int>();
  if (dim < 1 || dim > 64) throw ParseError("dim must lie in [1, 64]");
  return dim;
}

std::vector<cplx> read_entries(const json& j, std::size_t expected) {
  if (!j.contains("entries") || !j.at("entries").is_array()) {
    throw ParseError("expected array field \"entries\"");
  }
  const json& arr = j.at("entries");
  if (arr.size() != expected) {
    throw ParseError("expected " + std::to_string(expected) + " entries, got " +
                     std::to_string(arr.size()));
  }
  std::vector<cplx> out;
  out.reserve(expected);
  for (const json& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ParseError("each entry must be a [re, im] pair of numbers");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

json entry(const cplx& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(entry(m(r, c)));
  }
  return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
  const int dim = read_dim(j);
  const std::vector<cplx> e = read_entries(j, static_cast<std::size_t>(dim) * dim);
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = e[static_cast<std::size_t>(r) * dim + c];
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) entries.push_back(entry(v(i)));
  return json{{"dim", v.size()}, {"entries", std::move(entries)}};
}

Vector vector_from_json(const json& j) {
  const int dim = read_dim(j);
  const std::vector<cplx> e = read_entries(j, static_cast<std::size_t>(dim));
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = e[static_cast<std::size_t>(i)];
  return v;
}

json symmetry_to_json(const SymmetryOp& s) {
  json j = matrix_to_json(s.u);
  j["antiunitary"] = s.antiunitary;
  return j;
}

SymmetryOp symmetry_from_json(const json& j) {
  SymmetryOp s{matrix_from_json(j), false};
  if (j.contains("antiunitary")) {
    if (!j.at("antiunitary").is_boolean()) throw ParseError("\"antiunitary\" must be a boolean");
    s.antiunitary = j.at("antiunitary").get<bool>();
  }
  return s;
}

json map_to_json(const PureStateMap& map) {
  json pairs = json::array();
  for (const auto& [in, out] : map.pairs()) {
    pairs.push_back(json::array({vector_to_json(in.vector()), vector_to_json(out.vector())}));
  }
  return json{{"dim", map.dim()}, {"pairs", std::move(pairs)}};
}

PureStateMap map_from_json(const json& j) {
  const int dim = read_dim(j);
  if (!j.contains("pairs") || !j.at("pairs").is_array()) {
    throw ParseError("expected array field \"pairs\"");
  }
  PureStateMap map(dim);
  for (const json& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 2) throw ParseError("each pair must hold two vectors");
    const Vector in = vector_from_json(p[0]);
    const Vector out = vector_from_json(p[1]);
    if (in.size() != dim || out.size() != dim) throw ParseError("pair vector has the wrong dim");
    map.add(PureState::normalized(in), PureState::normalized(out));
  }
  return map;
}

json decomposition_to_json(const Decomposition& d) {
  json pures = json::array();
  for (const PureState& p : d.pures) pures.push_back(vector_to_json(p.vector()));
  return json{{"weights", d.weights}, {"pures", std::move(pures)}};
}

}  // namespace qcompat::io
