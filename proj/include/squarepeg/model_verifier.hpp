#pragma once

// Checks for the straightened model: the lines f0(t) = t + alpha i and
// g0(t) = t + beta i, the covering lines m, p, q, and intersection counts of
// linear circles in the 2-torus.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "squarepeg/curves.hpp"
#include "squarepeg/errors.hpp"
#include "squarepeg/parallel.hpp"
#include "squarepeg/torus.hpp"

namespace peg {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
/// unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Straight circle in the torus with a primitive homology class. The offset is
/// the transverse coordinate cross(class, point) mod 1, which is the same for
/// every point of the circle.
class LinearCircle {
 public:
  LinearCircle(Winding cls, double offset) : class_(cls) {
    if (std::gcd(cls[0], cls[1]) != 1) {
      throw NonPrimitiveClass("class (" + std::to_string(cls[0]) + "," + std::to_string(cls[1]) +
                              ") is not primitive");
    }
    offset_ = wrap_unit(offset);
    // Bezout: complete the class to a basis with cross(class, normal) == 1.
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1, a = cls[0], b = cls[1];
    while (b != 0) {
      const long q = a / b;
      std::tie(a, b) = std::pair{b, a - q * b};
      std::tie(x0, x1) = std::pair{x1, x0 - q * x1};
      std::tie(y0, y1) = std::pair{y1, y0 - q * y1};
    }
    if (a < 0) {
      x0 = -x0;
      y0 = -y0;
    }
    // cls[0] * x0 + cls[1] * y0 == 1, so normal = (-y0, x0).
    normal_ = {static_cast<double>(-y0), static_cast<double>(x0)};
  }

  static LinearCircle through(Winding cls, Complex point) {
    const Complex dir{double(cls[0]), double(cls[1])};
    return {cls, cross(dir, point)};
  }

  Winding homology_class() const { return class_; }
  double offset() const { return offset_; }
  Complex direction() const { return {double(class_[0]), double(class_[1])}; }
  Complex normal() const { return normal_; }
  /// Lifted point at parameter t.
  Complex point(double t) const { return direction() * t + normal_ * offset_; }

 private:
  Winding class_;
  double offset_ = 0.0;
  Complex normal_;
};

struct ModelData {
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  /// The other root of 2 mu = alpha - beta mod 1.
  double mu_alternate = 0.0;

  Complex f0(double t) const { return {t, alpha}; }
  Complex g0(double t) const { return {t, beta}; }
  Complex m(double t) const { return {t, mu}; }
  Complex p(double t) const { return {t, -delta}; }
  Complex q(double t) const { return {t, 2.0 * t - delta}; }

  LinearCircle m_circle() const { return {{1, 0}, mu}; }
  LinearCircle p_circle() const { return LinearCircle::through({1, 0}, p(0.0)); }
  LinearCircle q_circle() const { return LinearCircle::through({1, 2}, q(0.0)); }
};

namespace detail {
/// x mod 1 in [0, 1), snapping values within 1e-12 of 1 down to 0.
inline double guarded_unit(double x) {
  const double r = wrap_unit(x);
  return r > 1.0 - 1e-12 ? 0.0 : r;
}
}  // namespace detail

/// mu is the root of 2 mu = alpha - beta mod 1 in [0, 1/2); delta = alpha - mu mod 1.
inline ModelData build_model(double alpha, double beta) {
  ModelData d;
  d.alpha = detail::guarded_unit(alpha);
  d.beta = detail::guarded_unit(beta);
  d.mu = 0.5 * detail::guarded_unit(d.alpha - d.beta);
  d.mu_alternate = d.mu + 0.5;
  d.delta = detail::guarded_unit(d.alpha - d.mu);
  return d;
}

/// Max torus distance over a grid x grid sample of (s, t) between
///   c(m(s), p(t)) and (f0(s + t), g0(s - t)),
///   c(m(s), q(t)) and tau(f0(s + t + beta - alpha), g0(s - t + beta - alpha)),
/// and between each image and the image of the deck-translated (s + 1/2, t + 1/2).
inline double double_cover_check(const ModelData& md, int grid = 256) {
  const auto n = static_cast<std::size_t>(grid);
  std::vector<double> row_max(n, 0.0);
  const double shift = md.beta - md.alpha;
  parallel_for(n, [&](std::size_t i) {
    const double s = static_cast<double>(i) / grid;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double t = static_cast<double>(j) / grid;
      const TorusPair mp = covering_c({reduce(md.m(s)), reduce(md.p(t))});
      const TorusPair mq = covering_c({reduce(md.m(s)), reduce(md.q(t))});
      const TorusPair base{reduce(md.f0(s + t)), reduce(md.g0(s - t))};
      const TorusPair twisted = tau({reduce(md.f0(s + t + shift)), reduce(md.g0(s - t + shift))});
      const TorusPair mp_deck = covering_c({reduce(md.m(s + 0.5)), reduce(md.p(t + 0.5))});
      const TorusPair mq_deck = covering_c({reduce(md.m(s + 0.5)), reduce(md.q(t + 0.5))});
      worst = std::max({worst, torus_distance(mp, base), torus_distance(mq, twisted),
                        torus_distance(mp, mp_deck), torus_distance(mq, mq_deck)});
    }
    row_max[i] = worst;
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

/// Intersection-count lower bound for two straight circles: |det| when
/// transverse; when parallel, 2 for the same circle and 0 for distinct translates.
inline int hf_dimension_linear(const LinearCircle& l1, const LinearCircle& l2) {
  const auto c1 = l1.homology_class(), c2 = l2.homology_class();
  const long det = static_cast<long>(c1[0]) * c2[1] - static_cast<long>(c1[1]) * c2[0];
  if (det != 0) return static_cast<int>(std::labs(det));
  // Parallel: compare transverse coordinates in l1's orientation.
  const int sign = (c1 == c2) ? 1 : -1;
  const double diff = wrap_centered(l1.offset() - sign * l2.offset());
  return std::abs(diff) < 1e-12 ? 2 : 0;
}

/// HF(L1a x L1b, L2a x L2b) = HF(L1a, L2a) * HF(L1b, L2b).
inline int product_intersection_bound(const std::pair<LinearCircle, LinearCircle>& first,
                                      const std::pair<LinearCircle, LinearCircle>& second) {
  return hf_dimension_linear(first.first, second.first) * hf_dimension_linear(first.second, second.second);
}

namespace detail {

struct Piece {
  Complex a, b;
};

/// The circle cut along the integer grid lines, each piece moved into [0,1]^2.
inline std::vector<Piece> unit_square_pieces(const LinearCircle& l) {
  const Complex p0 = l.point(0.0), dir = l.direction();
  std::vector<double> cuts{0.0, 1.0};
  auto add_cuts = [&](double start, double step) {
    if (step == 0.0) return;
    const double end = start + step;
    for (double k = std::ceil(std::min(start, end)); k <= std::floor(std::max(start, end)); k += 1.0) {
      const double t = (k - start) / step;
      if (t > 0.0 && t < 1.0) cuts.push_back(t);
    }
  };
  add_cuts(p0.real(), dir.real());
  add_cuts(p0.imag(), dir.imag());
  std::sort(cuts.begin(), cuts.end());
  std::vector<Piece> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] < 1e-15) continue;
    const Complex a = p0 + dir * cuts[k], b = p0 + dir * cuts[k + 1];
    const Complex mid = 0.5 * (a + b);
    const Complex shift{std::floor(mid.real()), std::floor(mid.imag())};
    out.push_back({a - shift, b - shift});
  }
  return out;
}

}  // namespace detail

/// Transverse crossings of two straight circles, counted by cutting both into
/// segments inside the unit square and intersecting every pair. Requires det != 0.
inline int geometric_intersection_count(const LinearCircle& l1, const LinearCircle& l2) {
  const auto c1 = l1.homology_class(), c2 = l2.homology_class();
  if (static_cast<long>(c1[0]) * c2[1] - static_cast<long>(c1[1]) * c2[0] == 0) {
    throw InvalidInput("geometric_intersection_count: circles are parallel");
  }
  const auto pa = detail::unit_square_pieces(l1);
  const auto pb = detail::unit_square_pieces(l2);
  std::vector<TorusPoint> hits;
  for (const auto& a : pa) {
    for (const auto& b : pb) {
      const Complex da = a.b - a.a, db = b.b - b.a;
      const double denom = cross(da, db);
      if (denom == 0.0) continue;
      const double s = cross(b.a - a.a, db) / denom;
      const double t = cross(b.a - a.a, da) / denom;
      constexpr double kSlack = 1e-12;
      if (s < -kSlack || s > 1 + kSlack || t < -kSlack || t > 1 + kSlack) continue;
      const TorusPoint hit = reduce(a.a + s * da);
      const bool seen = std::any_of(hits.begin(), hits.end(),
                                    [&](const TorusPoint& h) { return torus_distance(h, hit) < 1e-9; });
      if (!seen) hits.push_back(hit);
    }
  }
  return static_cast<int>(hits.size());
}

// ---------------------------------------------------------------------------
// Pullback identities

struct PullbackSample {
  TorusPair at;
  TangentPair u, v;
};

inline std::vector<PullbackSample> pullback_samples(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto sym = [&] { return 2.0 * unit_uniform(rng) - 1.0; };
  std::vector<PullbackSample> out(count);
  for (auto& s : out) {
    s.at = {TorusPoint(unit_uniform(rng), unit_uniform(rng)), TorusPoint(unit_uniform(rng), unit_uniform(rng))};
    s.u = {{sym(), sym()}, {sym(), sym()}};
    s.v = {{sym(), sym()}, {sym(), sym()}};
  }
  return out;
}

/// max |omega(tau z; D tau u, D tau v) - omega(z; u, v)|.
inline double tau_symplectic_residual(std::size_t count = 1000, std::uint64_t seed = 20240601) {
  double worst = 0.0;
  for (const auto& s : pullback_samples(count, seed)) {
    const double lhs = omega_pm(tau(s.at), tau_differential(s.u), tau_differential(s.v));
    worst = std::max(worst, std::abs(lhs - omega_pm(s.at, s.u, s.v)));
  }
  return worst;
}

/// max |omega(c z; Dc u, Dc v) - factor * omega(z; u, v)|.
inline double cover_scale_residual(double factor = 4.0, std::size_t count = 1000,
                                   std::uint64_t seed = 20240602) {
  double worst = 0.0;
  for (const auto& s : pullback_samples(count, seed)) {
    const double lhs = omega_pm(covering_c(s.at), covering_differential(s.u), covering_differential(s.v));
    worst = std::max(worst, std::abs(lhs - factor * omega_pm(s.at, s.u, s.v)));
  }
  return worst;
}

/// Least-squares ratio omega(c z; Dc u, Dc v) / omega(z; u, v) over the samples.
inline double cover_scale_factor(std::size_t count = 1000, std::uint64_t seed = 20240602) {
  double num = 0.0, den = 0.0;
  for (const auto& s : pullback_samples(count, seed)) {
    const double base = omega_pm(s.at, s.u, s.v);
    num += base * omega_pm(covering_c(s.at), covering_differential(s.u), covering_differential(s.v));
    den += base * base;
  }
  return num / den;
}

struct VerificationReport {
  ModelData model;
  double tau_symplectic_residual = 0.0;
  double cover_scale_residual = 0.0;
  double cover_scale_factor = 0.0;
  double double_cover_residual = 0.0;
  std::array<int, 2> hf_factors{};
  int hf_product = 0;
  bool pass = false;
};

inline constexpr double kIdentityThreshold = 1e-12;
inline constexpr double kClaimedCoverFactor = 4.0;

/// Runs every model identity for the given heights and the HF count of m x p vs m x q.
inline VerificationReport verify_model(double alpha, double beta, int grid = 256) {
  VerificationReport r;
  r.model = build_model(alpha, beta);
  r.tau_symplectic_residual = tau_symplectic_residual();
  r.cover_scale_residual = cover_scale_residual(kClaimedCoverFactor);
  r.cover_scale_factor = cover_scale_factor();
  r.double_cover_residual = double_cover_check(r.model, grid);
  const LinearCircle m = r.model.m_circle(), p = r.model.p_circle(), q = r.model.q_circle();
  r.hf_factors = {hf_dimension_linear(m, m), hf_dimension_linear(p, q)};
  r.hf_product = product_intersection_bound({m, p}, {m, q});
  r.pass = r.tau_symplectic_residual < kIdentityThreshold && r.cover_scale_residual < kIdentityThreshold &&
           r.double_cover_residual < kIdentityThreshold && r.hf_product == 4;
  return r;
}

}  // namespace peg
