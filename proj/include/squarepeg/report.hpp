#pragma once

// JSON and SVG emission for solver, verifier and pipeline results.
// Doubles go through nlohmann's shortest round-trip printer, so equal inputs
// give byte-identical files.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "squarepeg/curve_io.hpp"
#include "squarepeg/curves.hpp"
#include "squarepeg/model_verifier.hpp"
#include "squarepeg/pipeline.hpp"
#include "squarepeg/square_finder.hpp"

namespace peg {

namespace detail {

inline json corners_json(const std::array<Complex, 4>& c) {
  json a = json::array();
  for (const auto& z : c) a.push_back(point_json(z));
  return a;
}

inline std::string svg_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

inline std::string svg_path(const std::vector<Complex>& pts, double break_jump) {
  std::string d;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const bool move = k == 0 || std::abs(pts[k] - pts[k - 1]) > break_jump;
    d += (k ? " " : "") + std::string(move ? "M" : "L") + svg_num(pts[k].real()) + "," + svg_num(pts[k].imag());
  }
  return d;
}

inline std::string svg_polygon(const std::array<Complex, 4>& c) {
  std::string s;
  for (int k = 0; k < 4; ++k) s += (k ? " " : "") + svg_num(c[k].real()) + "," + svg_num(c[k].imag());
  return s;
}

inline std::string svg_document(double x0, double y0, double w, double h, double stroke, const std::string& body) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << svg_num(x0) << ' '
    << svg_num(-(y0 + h)) << ' ' << svg_num(w) << ' ' << svg_num(h) << "\">\n"
    << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << svg_num(stroke) << "\">\n"
    << body << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace detail

inline json to_json(const SquareSolution& s, bool rotate_back = false) {
  auto corners = s.corners;
  if (rotate_back) {
    for (auto& c : corners) c = from_internal_frame(c);
  }
  return {{"params", json::array({s.params.a1, s.params.a2, s.params.b1, s.params.b2})},
          {"corners", detail::corners_json(corners)},
          {"side", s.side},
          {"residual_norm", s.residual_norm},
          {"degenerate_family", s.degenerate_family},
          {"jacobian_min_singular_value", s.jacobian_min_singular_value}};
}

inline json solve_report(const std::vector<SquareSolution>& sols, const SolverConfig& cfg, bool rotated) {
  json list = json::array();
  std::size_t nondeg = 0;
  for (const auto& s : sols) {
    list.push_back(to_json(s, rotated));
    nondeg += s.degenerate_family ? 0 : 1;
  }
  return {{"count", sols.size()},
          {"nondegenerate_count", nondeg},
          {"geometric_squares", count_geometric_squares(sols, cfg.dedup_radius)},
          {"grid_resolution", cfg.grid_resolution},
          {"newton_tol", cfg.newton_tol},
          {"solutions", std::move(list)}};
}

inline json to_json(const VerificationReport& r) {
  return {{"alpha", r.model.alpha},
          {"beta", r.model.beta},
          {"mu", r.model.mu},
          {"mu_alternate", r.model.mu_alternate},
          {"delta", r.model.delta},
          {"tau_symplectic_residual", r.tau_symplectic_residual},
          {"cover_scale_residual", r.cover_scale_residual},
          {"cover_scale_factor", r.cover_scale_factor},
          {"double_cover_residual", r.double_cover_residual},
          {"hf_factors", json::array({r.hf_factors[0], r.hf_factors[1]})},
          {"hf_product", r.hf_product},
          {"pass", r.pass}};
}

inline json to_json(const PlanarSquare& s) {
  return {{"corners", detail::corners_json(s.corners)}, {"side", s.side}, {"settled", s.settled}};
}

inline json to_json(const PipelineReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    json sols = json::array(), squares = json::array();
    for (const auto& s : l.solutions) sols.push_back(to_json(s));
    for (const auto& s : l.squares) squares.push_back(to_json(s));
    levels.push_back({{"width", l.width},
                      {"order", l.order},
                      {"c0_bound_f", l.c0_bound_f},
                      {"c0_bound_g", l.c0_bound_g},
                      {"epsilon", l.epsilon},
                      {"movement", l.movement ? json(*l.movement) : json(nullptr)},
                      {"tracked", l.tracked},
                      {"squares", std::move(squares)},
                      {"solutions", std::move(sols)}});
  }
  return {{"lambda", r.lambda},
          {"epsilon", r.epsilon},
          {"N", r.n_scale},
          {"converged", r.converged},
          {"converged_square", to_json(r.converged_square)},
          {"levels", std::move(levels)}};
}

/// Unit torus window with both loops reduced mod Z[i] and every square drawn.
template <class F, class G>
std::string solve_svg(const F& f, const G& g, const std::vector<SquareSolution>& sols, std::size_t samples = 2048) {
  auto loop = [&](const auto& c) {
    std::vector<Complex> pts;
    for (std::size_t j = 0; j <= samples; ++j) pts.push_back(reduce(c.position(double(j) / samples)).lift());
    return detail::svg_path(pts, 0.5);
  };
  std::string body = "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" stroke=\"#999\"/>\n";
  body += "<path stroke=\"#1f77b4\" d=\"" + loop(f) + "\"/>\n";
  body += "<path stroke=\"#d62728\" d=\"" + loop(g) + "\"/>\n";
  for (const auto& s : sols) body += "<polygon stroke=\"#2ca02c\" points=\"" + detail::svg_polygon(s.corners) + "\"/>\n";
  return detail::svg_document(-0.25, -0.25, 1.5, 1.5, 0.003, body);
}

/// Both input curves over N periods and the converged square.
inline std::string pipeline_svg(const PolylineCurve& f, const PolylineCurve& g, const PipelineReport& r) {
  const double n = r.n_scale;
  auto curve = [&](const PolylineCurve& c) {
    std::vector<Complex> pts;
    const std::size_t total = c.size() * static_cast<std::size_t>(r.n_scale);
    for (std::size_t j = 0; j <= total; ++j) pts.push_back(c.vertex(j));
    return detail::svg_path(pts, n + 1.0);
  };
  std::string body;
  body += "<path stroke=\"#1f77b4\" d=\"" + curve(f) + "\"/>\n";
  body += "<path stroke=\"#d62728\" d=\"" + curve(g) + "\"/>\n";
  body += "<polygon stroke=\"#2ca02c\" points=\"" + detail::svg_polygon(r.converged_square.corners) + "\"/>\n";
  const double half = r.lambda + 1.0;
  return detail::svg_document(-half, 0.0, 2.0 * half, n, 0.01, body);
}

}  // namespace peg
