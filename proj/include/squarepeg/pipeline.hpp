#pragma once

// End-to-end search for a square inscribed in two disjoint periodic planar
// curves with period (0, 1): smooth, rescale onto the torus, solve, lift back,
// and follow one square through a schedule of shrinking smoothing widths.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "squarepeg/curves.hpp"
#include "squarepeg/errors.hpp"
#include "squarepeg/square_finder.hpp"
#include "squarepeg/torus.hpp"

namespace peg {

struct PipelineConfig {
  std::vector<double> widths{0.02, 0.01, 0.005, 0.0025};
  std::vector<int> orders{512, 1024, 2048, 4096};
  SolverConfig solver{256, 1e-10, 50, 1e-6, 1e-6};
  /// Planar corner movement between consecutive levels that counts as converged.
  double convergence_tol = 1e-6;
  /// Width halvings tried when smoothing loses embedding or disjointness.
  int width_retries = 4;

  void validate() const {
    if (widths.empty() || widths.size() != orders.size()) {
      throw InvalidInput("pipeline config: widths and orders must be nonempty and of equal length");
    }
    for (std::size_t k = 0; k < widths.size(); ++k) {
      if (!(widths[k] > 0.0) || orders[k] < 0) throw InvalidInput("pipeline config: bad level " + std::to_string(k));
      if (k > 0 && !(widths[k] < widths[k - 1] && orders[k] > orders[k - 1])) {
        throw InvalidInput("pipeline config: widths must decrease and orders increase");
      }
    }
    if (!(convergence_tol > 0.0)) throw InvalidInput("pipeline config: convergence tol must be positive");
    solver.validate();
  }
};

struct PlanarSquare {
  std::array<Complex, 4> corners;
  double side = 0.0;
  /// Every corner sits farther than the kernel width (in parameter) from a
  /// polyline vertex, so the corners lie on the unsmoothed input.
  bool settled = false;
};

struct LevelResult {
  double width = 0.0;  // width actually used, after any retries
  int order = 0;
  double c0_bound_f = 0.0;
  double c0_bound_g = 0.0;
  double epsilon = 0.0;
  std::vector<SquareSolution> solutions;  // on the rescaled torus loops
  std::vector<PlanarSquare> squares;      // lifted to the input frame, one per period class
  std::size_t tracked = 0;                // index into squares
  std::optional<double> movement;         // distance to the previous level's tracked square
};

struct PipelineReport {
  double lambda = 0.0;
  double epsilon = 0.0;
  int n_scale = 1;
  std::vector<LevelResult> levels;
  PlanarSquare converged_square;
  bool converged = false;
};

/// Smallest integer strictly greater than 16 lambda (at least 1).
inline int select_N(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("select_N: lambda must be finite and >= 0");
  return static_cast<int>(std::floor(16.0 * lambda)) + 1;
}

/// Lifts a torus-scale square back to the input frame: P1 at its lift nearest the
/// strip around R/Z, the other corners at their lifts nearest P1 (each within
/// 1/4), then scaled by N and rotated back.
inline std::array<Complex, 4> lift_square(const std::array<Complex, 4>& torus_corners, int n_scale) {
  const TorusPoint c1 = reduce(torus_corners[0]);
  const Complex p1 = lift_near(c1, {c1.x(), 0.0});
  std::array<Complex, 4> out;
  out[0] = p1;
  for (int k = 1; k < 4; ++k) {
    out[k] = lift_near(reduce(torus_corners[k]), p1);
    const double d = std::abs(out[k] - p1);
    if (d > 0.25) {
      throw LiftInconsistent("corner " + std::to_string(k + 1) + " lifts at distance " + std::to_string(d) +
                             " > 1/4 from P1");
    }
  }
  for (auto& c : out) c = from_internal_frame(c * static_cast<double>(n_scale));
  return out;
}

inline std::array<Complex, 4> lift_square(const SquareSolution& sol, int n_scale) {
  return lift_square(sol.corners, n_scale);
}

namespace detail {

/// Translate by a multiple of the period (0, 1) so that P1 has y in [0, 1).
inline PlanarSquare normalized(std::array<Complex, 4> c) {
  const double k = std::floor(c[0].imag());
  for (auto& p : c) p -= Complex{0.0, k};
  return {c, std::abs(c[1] - c[0])};
}

/// Max corner distance, minimized over period translates.
inline double square_distance(const PlanarSquare& a, const PlanarSquare& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = -1; k <= 1; ++k) {
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(a.corners[c] - b.corners[c] - Complex{0.0, double(k)}));
    best = std::min(best, worst);
  }
  return best;
}

inline std::array<std::pair<double, double>, 4> sorted_corner_key(const PlanarSquare& s) {
  std::array<std::pair<double, double>, 4> k;
  for (int c = 0; c < 4; ++c) k[c] = {s.corners[c].real(), s.corners[c].imag()};
  std::sort(k.begin(), k.end());
  return k;
}

/// Parameter distance from u to the nearest vertex parameter j / n.
inline double vertex_clearance(double u, std::size_t n) {
  const double x = wrap_unit(u) * static_cast<double>(n);
  return std::abs(x - std::round(x)) / static_cast<double>(n);
}

inline bool settled(const SquareParams& p, int n_scale, std::size_t nf, std::size_t ng, double width) {
  const double s = n_scale;
  return vertex_clearance(s * p.a1, nf) > width && vertex_clearance(s * p.a2, nf) > width &&
         vertex_clearance(s * p.b1, ng) > width && vertex_clearance(s * p.b2, ng) > width;
}

struct SmoothedPair {
  MollifyResult f, g;
  double width = 0.0;
  double epsilon = 0.0;
};

inline SmoothedPair smooth_pair(const PolylineCurve& f, const PolylineCurve& g, double width, int order,
                                int retries) {
  const Quotient cyl = Quotient::along(f.period());
  std::string last;
  for (int attempt = 0; attempt <= retries; ++attempt, width *= 0.5) {
    try {
      auto sf = mollify(f, width, order);
      auto sg = mollify(g, width, order);
      const double eps = min_distance(sf.curve, sg.curve, cyl);
      if (eps > 0.0) return {std::move(sf), std::move(sg), width, eps};
      last = "smoothed curves touch at width " + std::to_string(width);
    } catch (const EmbeddingLost& e) {
      last = e.what();
    }
  }
  throw DisjointnessLost("smoothing failed after retries: " + last);
}

}  // namespace detail

inline PipelineReport run(const PolylineCurve& f, const PolylineCurve& g, const PipelineConfig& cfg = {}) {
  cfg.validate();
  const Complex vertical{0.0, 1.0};
  if (f.period() != vertical || g.period() != vertical) throw InvalidInput("pipeline: both curves need period (0,1)");
  const Quotient cyl = Quotient::along(vertical);
  if (!(min_distance(f, g, cyl) > 0.0)) throw InvalidInput("curves not disjoint");

  PipelineReport report;
  std::vector<detail::SmoothedPair> smoothed;
  double lambda = std::max(strip_halfwidth(f), strip_halfwidth(g));
  double epsilon = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < cfg.widths.size(); ++l) {
    smoothed.push_back(detail::smooth_pair(f, g, cfg.widths[l], cfg.orders[l], cfg.width_retries));
    const auto& s = smoothed.back();
    lambda = std::max({lambda, strip_halfwidth(s.f.curve), strip_halfwidth(s.g.curve)});
    epsilon = std::min(epsilon, s.epsilon);
  }
  report.lambda = lambda;
  report.epsilon = epsilon;
  report.n_scale = select_N(lambda);
  const int n = report.n_scale;
  if (!(n > 16.0 * lambda) || !(lambda / n < 1.0 / 16.0)) throw Error("pipeline: rescaled strip exceeds 1/16");

  for (std::size_t l = 0; l < smoothed.size(); ++l) {
    const auto& s = smoothed[l];
    LevelResult level;
    level.width = s.width;
    level.order = cfg.orders[l];
    level.c0_bound_f = s.f.c0_bound;
    level.c0_bound_g = s.g.c0_bound;
    level.epsilon = s.epsilon;
    const FourierCurve tf = rescale_to_torus(s.f.curve, n);
    const FourierCurve tg = rescale_to_torus(s.g.curve, n);
    level.solutions = solve_all(tf, tg, cfg.solver);

    for (const auto& sol : level.solutions) {
      PlanarSquare sq = detail::normalized(lift_square(sol, n));
      if (!verify_square_planar(sq.corners)) continue;
      sq.settled = detail::settled(sol.params, n, f.size(), g.size(), s.width);
      const bool dup = std::any_of(level.squares.begin(), level.squares.end(), [&](const PlanarSquare& o) {
        return detail::square_distance(o, sq) < 1e-7 * n;
      });
      if (!dup) level.squares.push_back(sq);
    }
    if (level.squares.empty()) throw NoSolutions("pipeline: no lifted square verified at level " + std::to_string(l));
    std::sort(level.squares.begin(), level.squares.end(), [](const auto& a, const auto& b) {
      return detail::sorted_corner_key(a) < detail::sorted_corner_key(b);
    });

    if (report.levels.empty()) {
      // Prefer a square the smoothing did not move: it stays put at every later level.
      auto it = std::find_if(level.squares.begin(), level.squares.end(), [](const auto& q) { return q.settled; });
      level.tracked = it == level.squares.end() ? 0 : static_cast<std::size_t>(it - level.squares.begin());
    } else {
      const PlanarSquare& prev = report.levels.back().squares[report.levels.back().tracked];
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < level.squares.size(); ++k) {
        const double d = detail::square_distance(prev, level.squares[k]);
        if (d < best) {
          best = d;
          level.tracked = k;
        }
      }
      level.movement = best;
    }
    const bool done = level.movement && *level.movement < cfg.convergence_tol;
    report.levels.push_back(std::move(level));
    if (done) {
      report.converged = true;
      break;
    }
  }
  const auto& last = report.levels.back();
  report.converged_square = last.squares[last.tracked];
  return report;
}

}  // namespace peg
