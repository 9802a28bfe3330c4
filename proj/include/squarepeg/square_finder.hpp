#pragma once

// Root finding for the square condition on a pair of degree-(1,0) torus loops:
//
//   f(a2) = f(a1) + i (g(b1) - f(a1))
//   g(b2) = g(b1) + i (g(b1) - f(a1))
//
// Zeros correspond one-to-one with points of (f x g) ∩ tau(f x g).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "squarepeg/curves.hpp"
#include "squarepeg/errors.hpp"
#include "squarepeg/parallel.hpp"
#include "squarepeg/torus.hpp"

namespace peg {

/// Curve parameters, each reduced mod 1. Stored in the order (a1, a2, b1, b2).
struct SquareParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  std::array<double, 4> as_array() const { return {a1, a2, b1, b2}; }
  static SquareParams from(const std::array<double, 4>& v) {
    return {wrap_unit(v[0]), wrap_unit(v[1]), wrap_unit(v[2]), wrap_unit(v[3])};
  }
  SquareParams reduced() const { return from(as_array()); }
};

/// Largest circular distance between corresponding parameters.
inline double param_distance(const SquareParams& p, const SquareParams& q) {
  const auto a = p.as_array(), b = q.as_array();
  double m = 0.0;
  for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(wrap_centered(a[k] - b[k])));
  return m;
}

struct SquareSolution {
  SquareParams params;
  /// Lifted corners P1 = f(a1), P2 = g(b1), P3 = g(b2), P4 = f(a2).
  std::array<Complex, 4> corners;
  double side = 0.0;
  double residual_norm = 0.0;
  bool degenerate_family = false;
  double jacobian_min_singular_value = 0.0;
};

struct SolverConfig {
  int grid_resolution = 64;
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double dedup_radius = 1e-6;
  double degenerate_svd_threshold = 1e-6;

  void validate() const {
    if (grid_resolution <= 0 || !(newton_tol > 0) || newton_max_iter <= 0 || !(dedup_radius > 0) ||
        !(degenerate_svd_threshold > 0)) {
      throw InvalidInput("solver config: all fields must be positive");
    }
  }
};

using Residual = std::array<double, 4>;
using Jacobian = Eigen::Matrix4d;

namespace detail {

inline constexpr Complex kUnitI{0.0, 1.0};

struct SquareJets {
  Jet f1, f2, g1, g2;  // f(a1), f(a2), g(b1), g(b2)
};

template <class F, class G>
SquareJets square_jets(const F& f, const G& g, const SquareParams& p) {
  return {f.jet(p.a1), f.jet(p.a2), g.jet(p.b1), g.jet(p.b2)};
}

inline Residual residual_from(const SquareJets& j) {
  const Complex v = j.g1.position - j.f1.position;
  // Both expressions change by elements of Z[i] under any change of lift, so the
  // minimal representative is single valued.
  const Complex r1 = minimal_rep(j.f2.position - j.f1.position - kUnitI * v);
  const Complex r2 = minimal_rep(j.g2.position - j.g1.position - kUnitI * v);
  return {r1.real(), r1.imag(), r2.real(), r2.imag()};
}

/// Columns are d/da1, d/da2, d/db1, d/db2; rows Re R1, Im R1, Re R2, Im R2.
inline Jacobian jacobian_from(const SquareJets& j) {
  const Complex i = kUnitI;
  const std::array<std::array<Complex, 4>, 2> d{{
      {(i - 1.0) * j.f1.velocity, j.f2.velocity, -i * j.g1.velocity, Complex{}},
      {i * j.f1.velocity, Complex{}, -(1.0 + i) * j.g1.velocity, j.g2.velocity},
  }};
  Jacobian m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 4; ++c) {
      m(2 * r, c) = d[r][c].real();
      m(2 * r + 1, c) = d[r][c].imag();
    }
  }
  return m;
}

inline double norm(const Residual& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3]); }

}  // namespace detail

template <class F, class G>
Residual residual(const F& f, const G& g, const SquareParams& p) {
  return detail::residual_from(detail::square_jets(f, g, p));
}

/// Analytic Jacobian of the residual from curve derivatives.
template <class F, class G>
Jacobian jacobian(const F& f, const G& g, const SquareParams& p) {
  return detail::jacobian_from(detail::square_jets(f, g, p));
}

inline double min_singular_value(const Jacobian& j) {
  Eigen::JacobiSVD<Jacobian> svd(j);
  return svd.singularValues()(3);
}

/// Planar square test: P2 - P1 = v, P3 - P2 = iv, P4 - P3 = -v, P1 - P4 = -iv with
/// |v| > 0, to 1e-8 relative to |v|.
inline bool verify_square_planar(const std::array<Complex, 4>& c, double rel_tol = 1e-8) {
  const Complex v = c[1] - c[0];
  const double side = std::abs(v);
  if (!(side > 0.0) || !std::isfinite(side)) return false;
  const Complex iv = detail::kUnitI * v;
  const double tol = rel_tol * side;
  return std::abs(c[2] - c[1] - iv) <= tol && std::abs(c[3] - c[2] + v) <= tol &&
         std::abs(c[0] - c[3] + iv) <= tol;
}
inline bool verify_square_planar(const SquareSolution& s) { return verify_square_planar(s.corners); }

/// Corners of the square encoded by p, lifted around P1 = f(a1): the side vector
/// is the minimal representative of g(b1) - f(a1).
template <class F, class G>
std::array<Complex, 4> square_corners(const F& f, const G& g, const SquareParams& p) {
  const Complex p1 = f.position(p.a1);
  const Complex v = minimal_rep(g.position(p.b1) - p1);
  const Complex p2 = p1 + v;
  const Complex iv = detail::kUnitI * v;
  const Complex p4 = lift_near(reduce(f.position(p.a2)), p1 + iv);
  const Complex p3 = lift_near(reduce(g.position(p.b2)), p2 + iv);
  return {p1, p2, p3, p4};
}

/// Damped Newton with SVD least-squares steps; rank-deficient directions get
/// the minimum-norm update. Returns a solution when ||R|| < newton_tol.
template <class F, class G>
std::optional<SquareSolution> refine(const F& f, const G& g, SquareParams p, const SolverConfig& cfg) {
  auto jets = detail::square_jets(f, g, p);
  Residual r = detail::residual_from(jets);
  double rn = detail::norm(r);
  for (int iter = 0; iter < cfg.newton_max_iter && rn >= cfg.newton_tol; ++iter) {
    const Jacobian jac = detail::jacobian_from(jets);
    Eigen::JacobiSVD<Jacobian> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    const Eigen::Vector4d rhs(r[0], r[1], r[2], r[3]);
    const Eigen::Vector4d step = -svd.solve(rhs);
    if (!step.allFinite()) return std::nullopt;
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 8; ++halving, lambda *= 0.5) {
      const auto base = p.as_array();
      const SquareParams trial = SquareParams::from(
          {base[0] + lambda * step(0), base[1] + lambda * step(1), base[2] + lambda * step(2),
           base[3] + lambda * step(3)});
      auto trial_jets = detail::square_jets(f, g, trial);
      const Residual tr = detail::residual_from(trial_jets);
      const double tn = detail::norm(tr);
      if (tn < rn) {
        p = trial;
        jets = trial_jets;
        r = tr;
        rn = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) return std::nullopt;
  }
  if (!(rn < cfg.newton_tol)) return std::nullopt;

  SquareSolution s;
  s.params = p;
  s.residual_norm = rn;
  s.corners = square_corners(f, g, p);
  s.side = std::abs(s.corners[1] - s.corners[0]);
  s.jacobian_min_singular_value = min_singular_value(detail::jacobian_from(jets));
  s.degenerate_family = s.jacobian_min_singular_value < cfg.degenerate_svd_threshold;
  return s;
}

namespace detail {

struct CurveSamples {
  std::vector<Complex> points;  // lifted
  std::vector<double> params;
  double max_speed = 0.0;
};

template <class C>
CurveSamples prefilter_samples(const C& c, std::size_t n) {
  CurveSamples s;
  s.points.resize(n);
  s.params.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(n);
    const Jet jt = c.jet(t);
    s.points[j] = jt.position;
    s.params[j] = t;
    s.max_speed = std::max(s.max_speed, std::abs(jt.velocity));
  }
  return s;
}

inline CurveSamples prefilter_samples(const FourierCurve& c, std::size_t n) {
  n = ((n + c.stride() - 1) / c.stride()) * c.stride();
  auto [pos, vel] = c.grid_jets(n);
  CurveSamples s;
  s.points = std::move(pos);
  s.params.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.params[j] = static_cast<double>(j) / static_cast<double>(n);
    s.max_speed = std::max(s.max_speed, std::abs(vel[j]));
  }
  return s;
}

/// Uniform bucket grid over [0,1)^2 with wraparound, for nearest-sample queries.
class TorusHash {
 public:
  TorusHash(const CurveSamples& s, double radius) : samples_(&s) {
    cells_ = std::clamp(static_cast<int>(std::floor(1.0 / std::max(radius, 1e-12))), 1, 1024);
    buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      const TorusPoint q = reduce(s.points[j]);
      buckets_[index(cell(q.x()), cell(q.y()))].push_back(j);
    }
  }

  /// Index of the sample nearest to q within radius, if any.
  std::optional<std::size_t> nearest(Complex q, double radius) const {
    const TorusPoint t = reduce(q);
    const int cx = cell(t.x()), cy = cell(t.y());
    const int reach = std::min(cells_, static_cast<int>(std::ceil(radius * cells_)));
    std::optional<std::size_t> best;
    double best_d = radius;
    auto visit = [&](const std::vector<std::size_t>& bucket) {
      for (std::size_t j : bucket) {
        const double d = torus_distance(t, reduce(samples_->points[j]));
        if (d <= best_d && (!best || d < best_d || j < *best)) {
          best_d = d;
          best = j;
        }
      }
    };
    if (2 * reach + 1 >= cells_) {
      for (const auto& bucket : buckets_) visit(bucket);
      return best;
    }
    for (int dx = -reach; dx <= reach; ++dx) {
      for (int dy = -reach; dy <= reach; ++dy) visit(buckets_[index(mod(cx + dx), mod(cy + dy))]);
    }
    return best;
  }

 private:
  int cell(double u) const { return std::min(cells_ - 1, static_cast<int>(u * cells_)); }
  int mod(int k) const { return ((k % cells_) + cells_) % cells_; }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(x) * cells_ + static_cast<std::size_t>(y); }

  const CurveSamples* samples_;
  int cells_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace detail

/// Corner-test prefilter: for each (a1, b1) on the grid, keep the pair when the
/// two predicted corners f(a1) + iv and g(b1) + iv lie near f and g respectively;
/// a2 and b2 come from the nearest samples.
template <class F, class G>
std::vector<SquareParams> seed_parameters(const F& f, const G& g, const SolverConfig& cfg) {
  const std::size_t res = static_cast<std::size_t>(cfg.grid_resolution);
  const std::size_t n_samples = std::max<std::size_t>(16 * res, 1024);
  const auto fs = detail::prefilter_samples(f, n_samples);
  const auto gs = detail::prefilter_samples(g, n_samples);
  const double speed = 1.1 * std::max(fs.max_speed, gs.max_speed);
  const double cell = 1.0 / static_cast<double>(res);
  const double spacing = speed / static_cast<double>(std::min(fs.points.size(), gs.points.size()));
  const double radius = 1.25 * ((std::sqrt(2.0) + 1.0) * speed * 0.5 * cell + spacing);
  const detail::TorusHash fh(fs, radius), gh(gs, radius);

  std::vector<Jet> fj(res), gj(res);
  for (std::size_t k = 0; k < res; ++k) {
    fj[k] = f.jet(static_cast<double>(k) * cell);
    gj[k] = g.jet(static_cast<double>(k) * cell);
  }
  std::vector<SquareParams> seeds;
  for (std::size_t i = 0; i < res; ++i) {
    for (std::size_t j = 0; j < res; ++j) {
      const Complex p1 = fj[i].position, p2 = gj[j].position;
      const Complex iv = detail::kUnitI * minimal_rep(p2 - p1);
      const auto a2 = fh.nearest(p1 + iv, radius);
      if (!a2) continue;
      const auto b2 = gh.nearest(p2 + iv, radius);
      if (!b2) continue;
      seeds.push_back({static_cast<double>(i) * cell, fs.params[*a2], static_cast<double>(j) * cell,
                       gs.params[*b2]});
    }
  }
  return seeds;
}

/// Lexicographic order on params, then greedy removal of anything within radius
/// of an already kept solution.
inline std::vector<SquareSolution> deduplicate(std::vector<SquareSolution> sols, double radius) {
  auto key = [](const SquareSolution& s) { return s.params.as_array(); };
  std::sort(sols.begin(), sols.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::vector<SquareSolution> kept;
  for (auto& s : sols) {
    bool dup = false;
    for (const auto& k : kept) {
      if (param_distance(k.params, s.params) < radius) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(s));
  }
  return kept;
}

/// All roots reachable from the prefiltered grid, deduplicated, sorted by params.
/// Throws NoSolutions when nothing converges.
template <class F, class G>
std::vector<SquareSolution> solve_all(const F& f, const G& g, const SolverConfig& cfg = {}) {
  cfg.validate();
  const auto seeds = seed_parameters(f, g, cfg);
  std::vector<std::optional<SquareSolution>> found(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t k) { found[k] = refine(f, g, seeds[k], cfg); });
  std::vector<SquareSolution> roots;
  for (auto& s : found) {
    if (s) roots.push_back(std::move(*s));
  }
  roots = deduplicate(std::move(roots), cfg.dedup_radius);
  if (roots.empty()) {
    throw NoSolutions("no inscribed square found from " + std::to_string(seeds.size()) +
                      " seeds at grid resolution " + std::to_string(cfg.grid_resolution));
  }
  return roots;
}

/// Point (f(a2), g(b2)) of (f x g) ∩ tau(f x g) for a solution, after checking it
/// equals tau(f(a1), g(b1)) to 1e-8.
template <class F, class G>
TorusPair to_intersection_point(const F& f, const G& g, const SquareSolution& sol, double tol = 1e-8) {
  const auto& p = sol.params;
  const TorusPair point{reduce(f.position(p.a2)), reduce(g.position(p.b2))};
  const TorusPair image = tau({reduce(f.position(p.a1)), reduce(g.position(p.b1))});
  const double d = torus_distance(point, image);
  if (!(d <= tol)) {
    throw BijectionViolated("intersection point differs from tau image by " + std::to_string(d));
  }
  return point;
}

/// Parameter t with curve(t) == target on the torus: nearest sample, then
/// Gauss-Newton on the minimal-representative offset.
template <class C>
double locate_parameter(const C& c, TorusPoint target, std::size_t samples = 4096) {
  double best_t = 0.0, best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(samples);
    const double d = torus_distance(reduce(c.position(t)), target);
    if (d < best_d) {
      best_d = d;
      best_t = t;
    }
  }
  double t = best_t;
  for (int iter = 0; iter < 50; ++iter) {
    const Jet j = c.jet(t);
    const Complex r = minimal_rep(j.position - target.lift());
    const double speed2 = std::norm(j.velocity);
    if (speed2 == 0.0) break;
    const double dt = -(r * std::conj(j.velocity)).real() / speed2;
    t = wrap_unit(t + dt);
    if (std::abs(dt) < 1e-15) break;
  }
  return t;
}

/// Recovers the parameters of the square from its intersection point by
/// applying tau^{-1} and locating each factor on its curve.
template <class F, class G>
SquareParams params_from_intersection(const F& f, const G& g, const TorusPair& point) {
  const TorusPair base = tau_inverse(point);
  return {locate_parameter(f, base.first), locate_parameter(f, point.first), locate_parameter(g, base.second),
          locate_parameter(g, point.second)};
}

/// Number of distinct squares as unordered sets of torus corners.
inline std::size_t count_geometric_squares(const std::vector<SquareSolution>& sols, double radius = 1e-6) {
  std::vector<std::array<std::pair<double, double>, 4>> keys;
  for (const auto& s : sols) {
    std::array<std::pair<double, double>, 4> k;
    for (int c = 0; c < 4; ++c) {
      const TorusPoint t = reduce(s.corners[c]);
      k[c] = {t.x(), t.y()};
    }
    std::sort(k.begin(), k.end());
    keys.push_back(k);
  }
  std::vector<std::array<std::pair<double, double>, 4>> distinct;
  for (const auto& k : keys) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const auto& d) {
      // Same corner set: every corner of k is within radius of some corner of d.
      return std::all_of(k.begin(), k.end(), [&](const auto& a) {
        return std::any_of(d.begin(), d.end(), [&](const auto& b) {
          return torus_distance(TorusPoint(a.first, a.second), TorusPoint(b.first, b.second)) < radius;
        });
      });
    });
    if (!seen) distinct.push_back(k);
  }
  return distinct.size();
}

}  // namespace peg
