#pragma once

// JSON readers and writers for polytopes and zonotopes.
//   polytope: {"dim": n, "vertices": [[...], ...]}
//   zonotope: {"dim": n, "center": [...], "generators": [[...], ...]}
// Facets are always recomputed from the vertices.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isoconst/geometry.hpp"
#include "isoconst/zonotopes.hpp"

namespace isoconst::io {

using json = nlohmann::ordered_json;

/// Malformed or ill-typed input (exit code 2 in the CLI).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file (exit code 4 in the CLI).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

namespace detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, start = 0;
  for (std::size_t i = 0; i < byte; ++i)
    if (text[i] == '\n') {
      ++line;
      start = i + 1;
    }
  std::size_t end = text.find('\n', start);
  if (end == std::string::npos) end = text.size();
  return "line " + std::to_string(line) + ", column " + std::to_string(byte - start + 1) + ": " +
         text.substr(start, std::min<std::size_t>(end - start, 120));
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": invalid JSON at " + line_context(text, e.byte == 0 ? 0 : e.byte - 1));
  }
}

inline Vector read_vector(const json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ParseError(where + ": expected an array of " + std::to_string(n) + " numbers");
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw ParseError(where + ": expected a number");
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

inline int read_dim(const json& j, const std::string& source) {
  if (!j.is_object()) throw ParseError(source + ": top-level value must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ParseError(source + ": missing integer \"dim\"");
  const int n = j["dim"].get<int>();
  if (n < 1 || n > kMaxDimension) throw ParseError(source + ": dim must be in [1, 6]");
  return n;
}

inline std::vector<Vector> read_vectors(const json& j, const char* key, int n, const std::string& source) {
  if (!j.contains(key) || !j[key].is_array()) throw ParseError(source + ": missing array \"" + key + "\"");
  std::vector<Vector> out;
  for (std::size_t k = 0; k < j[key].size(); ++k)
    out.push_back(read_vector(j[key][k], n, source + ": " + key + "[" + std::to_string(k) + "]"));
  return out;
}

inline json to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json to_json(const Matrix& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

}  // namespace detail

inline Polytope polytope_from_json(const json& j, const std::string& source = "input") {
  const int n = detail::read_dim(j, source);
  return convex_hull(detail::read_vectors(j, "vertices", n, source), n);
}

inline Polytope parse_polytope(const std::string& text, const std::string& source = "input") {
  return polytope_from_json(detail::parse_text(text, source), source);
}

inline Zonotope zonotope_from_json(const json& j, const std::string& source = "input") {
  const int n = detail::read_dim(j, source);
  Zonotope z{n, Vector::Zero(n), detail::read_vectors(j, "generators", n, source)};
  if (j.contains("center")) z.center = detail::read_vector(j["center"], n, source + ": center");
  return z;
}

inline Zonotope parse_zonotope(const std::string& text, const std::string& source = "input") {
  return zonotope_from_json(detail::parse_text(text, source), source);
}

inline json parse_json(const std::string& text, const std::string& source = "input") {
  return detail::parse_text(text, source);
}

inline json to_json(const Polytope& p) {
  json j;
  j["dim"] = p.dim();
  j["vertices"] = json::array();
  for (const auto& v : p.vertices()) j["vertices"].push_back(detail::to_json(v));
  return j;
}

inline json to_json(const Zonotope& z) {
  json j;
  j["dim"] = z.dim;
  j["center"] = detail::to_json(z.center);
  j["generators"] = json::array();
  for (const auto& g : z.generators) j["generators"].push_back(detail::to_json(g));
  return j;
}

inline json to_json(const AffineMap& m) {
  return json{{"linear", detail::to_json(m.linear)}, {"shift", detail::to_json(m.shift)}};
}

inline json to_json(const Vector& v) { return detail::to_json(v); }
inline json to_json(const Matrix& m) { return detail::to_json(m); }

}  // namespace isoconst::io
