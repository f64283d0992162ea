#pragma once

// Text file formats (JSON):
//   matrix:   {"dim": n, "entries": [[re, im], ...]}   n*n pairs, row-major
//   vector:   {"dim": n, "entries": [[re, im], ...]}   n pairs
//   symmetry: matrix fields plus "antiunitary": bool
//   map:      {"dim": n, "pairs": [[vector, vector], ...]}   (input, output)

#include <string>

#include "json.hpp"

#include "qcompat/compat_measure.hpp"
#include "qcompat/preserver.hpp"
#include "qcompat/state_algebra.hpp"
#include "qcompat/symmetry.hpp"

namespace qcompat::io {

using nlohmann::json;

/// Throws ParseError on unreadable files or malformed JSON.
json load_json(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Hex SHA-256 of the file bytes.
std::string file_digest(const std::string& path);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

json symmetry_to_json(const SymmetryOp& s);
SymmetryOp symmetry_from_json(const json& j);

/// Vectors are normalized on load.
json map_to_json(const PureStateMap& map);
PureStateMap map_from_json(const json& j);

json decomposition_to_json(const Decomposition& d);

}  // namespace qcompat::io
