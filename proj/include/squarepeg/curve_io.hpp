#pragma once

// Curve pair files:
//   { "curves": [entry, entry] }
//   entry = { "kind": "polyline", "period": [px, py], "points": [[x, y], ...] }
//        | { "kind": "fourier", "class": [u, v], "cos": [[re, im], ...], "sin": [[re, im], ...] }
// cos[k] and sin[k] multiply cos(2 pi k t) and sin(2 pi k t); sin[0] is ignored.

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "squarepeg/curves.hpp"
#include "squarepeg/errors.hpp"

namespace peg {

using json = nlohmann::json;

struct CurvePair {
  Curve f;
  Curve g;
};

namespace detail {

[[noreturn]] inline void bad_field(const std::string& path, const std::string& what) {
  throw InvalidInput("field '" + path + "': " + what);
}

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) bad_field(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad_field(path + "." + key, "missing");
  return *it;
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) bad_field(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) bad_field(path, "not finite");
  return x;
}

inline Complex point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) bad_field(path, "expected [x, y]");
  return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

inline std::vector<Complex> point_list(const json& v, const std::string& path) {
  if (!v.is_array()) bad_field(path, "expected an array of [x, y]");
  std::vector<Complex> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(point(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) bad_field(path, "expected an integer");
  return v.get<int>();
}

inline Curve parse_curve(const json& entry, const std::string& path) {
  const json& kind = field(entry, "kind", path);
  if (!kind.is_string()) bad_field(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  try {
    if (k == "polyline") {
      const Complex per = point(field(entry, "period", path), path + ".period");
      auto pts = point_list(field(entry, "points", path), path + ".points");
      if (pts.empty()) bad_field(path + ".points", "empty");
      return PolylineCurve(std::move(pts), per);
    }
    if (k == "fourier") {
      const json& cls = field(entry, "class", path);
      if (!cls.is_array() || cls.size() != 2) bad_field(path + ".class", "expected [u, v]");
      const Winding w{integer(cls[0], path + ".class[0]"), integer(cls[1], path + ".class[1]")};
      auto c = point_list(field(entry, "cos", path), path + ".cos");
      std::vector<Complex> s;
      if (entry.contains("sin")) s = point_list(entry["sin"], path + ".sin");
      return FourierCurve(w, std::move(c), std::move(s));
    }
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    if (msg.rfind("field '", 0) == 0) throw;
    bad_field(path, msg);
  }
  bad_field(path + ".kind", "unknown kind '" + k + "'");
}

inline json point_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json point_list_json(const std::vector<Complex>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(point_json(z));
  return a;
}

}  // namespace detail

inline CurvePair parse_curve_pair(const json& doc) {
  const json& curves = detail::field(doc, "curves", "$");
  if (!curves.is_array() || curves.size() != 2) detail::bad_field("$.curves", "expected exactly two curves");
  return {detail::parse_curve(curves[0], "$.curves[0]"), detail::parse_curve(curves[1], "$.curves[1]")};
}

inline CurvePair parse_curve_pair(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  return parse_curve_pair(doc);
}

inline CurvePair load_curve_pair(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + file + "'");
  return parse_curve_pair(std::string(std::istreambuf_iterator<char>(in), {}));
}

inline json to_json(const FourierCurve& c) {
  if (c.stride() != 1) throw InvalidInput("only unit-stride fourier curves serialize");
  return {{"kind", "fourier"},
          {"class", json::array({c.winding()[0], c.winding()[1]})},
          {"cos", detail::point_list_json(c.cos_terms())},
          {"sin", detail::point_list_json(c.sin_terms())}};
}

inline json to_json(const PolylineCurve& c) {
  return {{"kind", "polyline"}, {"period", detail::point_json(c.period())},
          {"points", detail::point_list_json(c.vertices())}};
}

inline json to_json(const Curve& c) {
  return std::visit([](const auto& x) { return to_json(x); }, c);
}

inline json to_json(const CurvePair& p) { return {{"curves", json::array({to_json(p.f), to_json(p.g)})}}; }

}  // namespace peg
