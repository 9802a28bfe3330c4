#pragma once

// Periodic planar curves and degree-(1,0) torus loops.
//
// Every curve exposes a planar lift `position(t)` with
//   position(t + 1) == position(t) + period()
// where period() is a Gaussian integer for torus loops, and a planar period
// vector for periodic planar curves.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "squarepeg/errors.hpp"
#include "squarepeg/fft.hpp"
#include "squarepeg/torus.hpp"

namespace peg {

using Winding = std::array<int, 2>;

struct Jet {
  Complex position;
  Complex velocity;
};

/// Smooth loop  winding * t + sum_k cos_k cos(2 pi k s t) + sin_k sin(2 pi k s t)
/// where s is the harmonic stride (1 unless the curve was rescaled).
class FourierCurve {
 public:
  FourierCurve(Winding winding, std::vector<Complex> cos_terms, std::vector<Complex> sin_terms,
               int stride = 1)
      : winding_(winding), cos_(std::move(cos_terms)), sin_(std::move(sin_terms)), stride_(stride) {
    if (stride_ < 1) throw InvalidInput("fourier curve: stride must be >= 1");
    if (cos_.empty()) cos_.push_back({0.0, 0.0});
    const std::size_t m = std::max(cos_.size(), sin_.size());
    cos_.resize(m, Complex{});
    sin_.resize(m, Complex{});
    for (std::size_t k = 0; k < m; ++k) {
      if (!std::isfinite(std::abs(cos_[k])) || !std::isfinite(std::abs(sin_[k]))) {
        throw InvalidInput("fourier curve: non-finite coefficient at harmonic " + std::to_string(k));
      }
    }
    // sin(0) == 0: the k = 0 sine slot carries no information.
    sin_[0] = {};
    double speed = std::abs(period());
    double accel = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
      const double w = kTwoPi * static_cast<double>(k) * stride_;
      const double a = std::abs(cos_[k]) + std::abs(sin_[k]);
      speed += w * a;
      accel += w * w * a;
    }
    speed_bound_ = speed;
    accel_bound_ = accel;
  }

  /// Straight loop t + height * i.
  static FourierCurve line(double height) { return FourierCurve({1, 0}, {{0.0, height}}, {}); }

  Winding winding() const { return winding_; }
  Complex period() const { return {double(winding_[0]), double(winding_[1])}; }
  int order() const { return static_cast<int>(cos_.size()) - 1; }
  int stride() const { return stride_; }
  const std::vector<Complex>& cos_terms() const { return cos_; }
  const std::vector<Complex>& sin_terms() const { return sin_; }

  /// Upper bounds on |f'| and |f''| from the coefficient magnitudes.
  double speed_bound() const { return speed_bound_; }
  double acceleration_bound() const { return accel_bound_; }

  Complex position(double t) const { return jet(t).position; }
  Complex velocity(double t) const { return jet(t).velocity; }

  Jet jet(double t) const {
    const double phase = wrap_unit(static_cast<double>(stride_) * t);
    const double c1 = std::cos(kTwoPi * phase);
    const double s1 = std::sin(kTwoPi * phase);
    Complex pos = period() * t + cos_[0];
    Complex vel = period();
    double ck = 1.0;
    double sk = 0.0;
    const double base = kTwoPi * stride_;
    for (std::size_t k = 1; k < cos_.size(); ++k) {
      const double c = ck * c1 - sk * s1;
      sk = sk * c1 + ck * s1;
      ck = c;
      pos += cos_[k] * ck + sin_[k] * sk;
      vel += (base * static_cast<double>(k)) * (sin_[k] * ck - cos_[k] * sk);
    }
    return {pos, vel};
  }

  Complex acceleration(double t) const {
    const double phase = wrap_unit(static_cast<double>(stride_) * t);
    Complex acc{};
    for (std::size_t k = 1; k < cos_.size(); ++k) {
      const double w = kTwoPi * static_cast<double>(k) * stride_;
      const double th = kTwoPi * static_cast<double>(k) * phase;
      acc -= w * w * (cos_[k] * std::cos(th) + sin_[k] * std::sin(th));
    }
    return acc;
  }

  /// Same curve reparameterized by t -> t + s.
  FourierCurve shifted(double s) const {
    std::vector<Complex> c(cos_.size()), sn(sin_.size());
    c[0] = cos_[0] + period() * s;
    for (std::size_t k = 1; k < cos_.size(); ++k) {
      const double th = kTwoPi * static_cast<double>(k) * stride_ * s;
      const double ct = std::cos(th), st = std::sin(th);
      c[k] = cos_[k] * ct + sin_[k] * st;
      sn[k] = sin_[k] * ct - cos_[k] * st;
    }
    return {winding_, std::move(c), std::move(sn), stride_};
  }

  /// Positions and velocities at t_j = j / n, j < n. Requires n % stride == 0.
  std::pair<std::vector<Complex>, std::vector<Complex>> grid_jets(std::size_t n) const {
    if (n == 0 || n % static_cast<std::size_t>(stride_) != 0) {
      throw InvalidInput("fourier curve: grid size must be a positive multiple of the stride");
    }
    const std::size_t m = n / static_cast<std::size_t>(stride_);
    const std::size_t terms = cos_.size();
    // Oversample so that harmonics -M..M occupy distinct bins, then decimate.
    std::size_t factor = 1;
    while (m * factor < 2 * terms + 1) ++factor;
    const std::size_t len = m * factor;
    std::vector<Complex> pc(len), vc(len);
    pc[0] = cos_[0];
    for (std::size_t k = 1; k < terms; ++k) {
      const Complex i{0.0, 1.0};
      const Complex plus = 0.5 * (cos_[k] - i * sin_[k]);
      const Complex minus = 0.5 * (cos_[k] + i * sin_[k]);
      const double w = kTwoPi * static_cast<double>(k) * stride_;
      pc[k] += plus;
      pc[len - k] += minus;
      vc[k] += i * w * plus;
      vc[len - k] += -i * w * minus;
    }
    const auto p = detail::inverse_dft(std::move(pc));
    const auto v = detail::inverse_dft(std::move(vc));
    std::vector<Complex> pos(n), vel(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t base = (j % m) * factor;
      const double t = static_cast<double>(j) / static_cast<double>(n);
      pos[j] = period() * t + p[base];
      vel[j] = period() + v[base];
    }
    return {std::move(pos), std::move(vel)};
  }

 private:
  Winding winding_;
  std::vector<Complex> cos_;
  std::vector<Complex> sin_;
  int stride_;
  double speed_bound_ = 0.0;
  double accel_bound_ = 0.0;
};

namespace detail {

inline bool segments_touch(Complex a0, Complex a1, Complex b0, Complex b1);
inline double segment_distance(Complex a0, Complex a1, Complex b0, Complex b1);

}  // namespace detail

/// Piecewise-linear periodic curve. Vertex j sits at t = j / n; the segment after
/// the last vertex ends at vertices[0] + period.
class PolylineCurve {
 public:
  PolylineCurve(std::vector<Complex> vertices, Complex period)
      : vertices_(std::move(vertices)), period_(period) {
    const std::size_t n = vertices_.size();
    if (n == 0) throw InvalidInput("polyline: no vertices");
    if (!std::isfinite(std::abs(period_)) || std::abs(period_) == 0.0) {
      throw InvalidInput("polyline: period must be a finite nonzero vector");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(std::abs(vertices_[j]))) throw InvalidInput("polyline: non-finite vertex");
      if (vertex(j + 1) == vertex(j)) {
        throw InvalidInput("polyline: consecutive vertices " + std::to_string(j) + " coincide");
      }
    }
    double longest = 0.0;
    for (std::size_t j = 0; j < n; ++j) longest = std::max(longest, std::abs(vertex(j + 1) - vertex(j)));
    speed_bound_ = static_cast<double>(n) * longest;
    check_injective();
  }

  const std::vector<Complex>& vertices() const { return vertices_; }
  Complex period() const { return period_; }
  std::size_t size() const { return vertices_.size(); }
  double speed_bound() const { return speed_bound_; }

  /// Vertex j for any j >= 0, continued periodically.
  Complex vertex(std::size_t j) const {
    const std::size_t n = vertices_.size();
    return vertices_[j % n] + period_ * static_cast<double>(j / n);
  }

  Jet jet(double t) const {
    const std::size_t n = vertices_.size();
    const double k = std::floor(t);
    const double u = (t - k) * static_cast<double>(n);
    std::size_t j = static_cast<std::size_t>(std::floor(u));
    if (j >= n) j = n - 1;
    const double frac = u - static_cast<double>(j);
    const Complex a = vertex(j), b = vertex(j + 1);
    return {a + frac * (b - a) + k * period_, static_cast<double>(n) * (b - a)};
  }
  Complex position(double t) const { return jet(t).position; }
  /// Right derivative.
  Complex velocity(double t) const { return jet(t).velocity; }

 private:
  void check_injective() const;

  std::vector<Complex> vertices_;
  Complex period_;
  double speed_bound_ = 0.0;
};

using Curve = std::variant<FourierCurve, PolylineCurve>;

inline Complex position(const Curve& c, double t) {
  return std::visit([t](const auto& x) { return x.position(t); }, c);
}
inline Complex period(const Curve& c) {
  return std::visit([](const auto& x) { return x.period(); }, c);
}
/// Point of the curve on the torus.
inline TorusPoint evaluate(const Curve& c, double t) { return reduce(position(c, t)); }
inline TorusPoint evaluate(const FourierCurve& c, double t) { return reduce(c.position(t)); }
inline TorusPoint evaluate(const PolylineCurve& c, double t) { return reduce(c.position(t)); }

/// Term-by-term derivative.
inline Complex derivative(const FourierCurve& c, double t) { return c.velocity(t); }

// ---------------------------------------------------------------------------
// Quotients and sampled curves

/// Which axes are identified modulo 1 when measuring distances.
struct Quotient {
  bool wrap_x = true;
  bool wrap_y = true;

  static Quotient torus() { return {true, true}; }
  static Quotient plane() { return {false, false}; }

  /// Cylinder obtained from a unit axis-aligned period.
  static Quotient along(Complex period) {
    if (period == Complex{0.0, 1.0} || period == Complex{0.0, -1.0}) return {false, true};
    if (period == Complex{1.0, 0.0} || period == Complex{-1.0, 0.0}) return {true, false};
    throw InvalidInput("distance quotient needs a unit axis-aligned period");
  }

  Complex reduce_delta(Complex d) const {
    return {wrap_x ? wrap_centered(d.real()) : d.real(), wrap_y ? wrap_centered(d.imag()) : d.imag()};
  }
};

/// Closed polyline through samples of one period, with a certified bound on the
/// distance from every curve point to its chord.
struct SampledCurve {
  std::vector<Complex> points;  // segments + 1 entries, back() == front() + period
  std::vector<double> params;   // matching parameters in [0, 1]
  double deviation = 0.0;

  std::size_t segments() const { return points.size() - 1; }
};

/// Exact sampling: every vertex, with segments subdivided to length <= max_len.
inline SampledCurve sample(const PolylineCurve& c, double max_len = 1.0 / 16.0) {
  SampledCurve s;
  const std::size_t n = c.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = c.vertex(j), b = c.vertex(j + 1);
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(std::abs(b - a) / max_len)));
    for (std::size_t p = 0; p < pieces; ++p) {
      const double f = static_cast<double>(p) / static_cast<double>(pieces);
      s.points.push_back(a + f * (b - a));
      s.params.push_back((static_cast<double>(j) + f) / static_cast<double>(n));
    }
  }
  s.points.push_back(c.vertex(n));
  s.params.push_back(1.0);
  return s;
}

/// Sample count for a Fourier curve: chord deviation A h^2 / 8 <= target when
/// affordable, segments no longer than 1/16, at most max_samples (rounded to the stride).
inline std::size_t fourier_sample_count(const FourierCurve& c, double target_deviation,
                                        std::size_t max_samples = std::size_t{1} << 16) {
  const double a = c.acceleration_bound();
  double n = std::max(256.0, 16.0 * c.speed_bound());
  n = std::max(n, 4.0 * (2.0 * c.order() + 1.0) * c.stride());
  if (a > 0.0) n = std::max(n, std::sqrt(a / (8.0 * target_deviation)));
  n = std::min(n, static_cast<double>(max_samples));
  const auto stride = static_cast<std::size_t>(c.stride());
  const std::size_t per = detail::next_pow2(static_cast<std::size_t>(std::ceil(n / double(stride))));
  return per * stride;
}

inline SampledCurve sample(const FourierCurve& c, std::size_t n) {
  auto [pos, vel] = c.grid_jets(n);
  SampledCurve s;
  s.points = std::move(pos);
  s.points.push_back(s.points.front() + c.period());
  s.params.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) s.params[j] = static_cast<double>(j) / static_cast<double>(n);
  const double h = 1.0 / static_cast<double>(n);
  s.deviation = c.acceleration_bound() * h * h / 8.0;
  return s;
}

namespace detail {

inline double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double f = 0.0;
  if (len2 > 0.0) f = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + f * ab));
}

inline bool segments_touch(Complex a0, Complex a1, Complex b0, Complex b1) {
  const double d1 = cross(a1 - a0, b0 - a0);
  const double d2 = cross(a1 - a0, b1 - a0);
  const double d3 = cross(b1 - b0, a0 - b0);
  const double d4 = cross(b1 - b0, a1 - b0);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on = [](Complex p, Complex a, Complex b, double d) {
    return d == 0.0 && std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
  };
  return on(b0, a0, a1, d1) || on(b1, a0, a1, d2) || on(a0, b0, b1, d3) || on(a1, b0, b1, d4);
}

inline double segment_distance(Complex a0, Complex a1, Complex b0, Complex b1) {
  if (segments_touch(a0, a1, b0, b1)) return 0.0;
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

struct ChunkBox {
  Complex center;
  double hx = 0.0;
  double hy = 0.0;
  std::size_t lo = 0;  // segments [lo, hi)
  std::size_t hi = 0;
};

inline std::vector<ChunkBox> chunk_boxes(const SampledCurve& s, std::size_t chunk) {
  std::vector<ChunkBox> out;
  for (std::size_t lo = 0; lo < s.segments(); lo += chunk) {
    const std::size_t hi = std::min(s.segments(), lo + chunk);
    double x0 = s.points[lo].real(), x1 = x0, y0 = s.points[lo].imag(), y1 = y0;
    for (std::size_t j = lo; j <= hi; ++j) {
      x0 = std::min(x0, s.points[j].real());
      x1 = std::max(x1, s.points[j].real());
      y0 = std::min(y0, s.points[j].imag());
      y1 = std::max(y1, s.points[j].imag());
    }
    out.push_back({{0.5 * (x0 + x1), 0.5 * (y0 + y1)}, 0.5 * (x1 - x0), 0.5 * (y1 - y0), lo, hi});
  }
  return out;
}

/// Lower bound on the quotient distance between two boxes.
inline double box_gap(const ChunkBox& a, const ChunkBox& b, const Quotient& q) {
  const Complex d = q.reduce_delta(b.center - a.center);
  const double sx = a.hx + b.hx, sy = a.hy + b.hy;
  if ((q.wrap_x && sx >= 0.5) || (q.wrap_y && sy >= 0.5)) return 0.0;
  const double gx = std::max(0.0, std::abs(d.real()) - sx);
  const double gy = std::max(0.0, std::abs(d.imag()) - sy);
  return std::hypot(gx, gy);
}

/// Quotient distance between segment i of A and segment j of B, using the
/// translate of B's segment whose midpoint is nearest A's.
inline double quotient_segment_distance(const SampledCurve& a, std::size_t i, const SampledCurve& b,
                                        std::size_t j, const Quotient& q) {
  const Complex ma = 0.5 * (a.points[i] + a.points[i + 1]);
  const Complex mb = 0.5 * (b.points[j] + b.points[j + 1]);
  const Complex shift = q.reduce_delta(mb - ma) - (mb - ma);
  return segment_distance(a.points[i], a.points[i + 1], b.points[j] + shift, b.points[j + 1] + shift);
}

}  // namespace detail

/// Minimum quotient distance between the two sampled polylines (branch and bound over chunks).
inline double polyline_distance(const SampledCurve& a, const SampledCurve& b, const Quotient& q) {
  constexpr std::size_t kChunk = 64;
  const auto ba = detail::chunk_boxes(a, kChunk);
  const auto bb = detail::chunk_boxes(b, kChunk);
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pairs;
  pairs.reserve(ba.size() * bb.size());
  for (std::size_t i = 0; i < ba.size(); ++i) {
    for (std::size_t j = 0; j < bb.size(); ++j) pairs.push_back({detail::box_gap(ba[i], bb[j], q), {i, j}});
  }
  std::sort(pairs.begin(), pairs.end());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [gap, ij] : pairs) {
    if (gap >= best) break;
    const auto& ca = ba[ij.first];
    const auto& cb = bb[ij.second];
    for (std::size_t s = ca.lo; s < ca.hi; ++s) {
      for (std::size_t t = cb.lo; t < cb.hi; ++t) {
        best = std::min(best, detail::quotient_segment_distance(a, s, b, t, q));
      }
    }
  }
  return best;
}

/// Self-intersection test of a sampled closed curve in the quotient. Segment
/// pairs fewer than min_gap apart (circularly) are skipped; any other pair
/// closer than threshold (or touching, when threshold is zero) is a failure.
inline bool sampled_is_embedded(const SampledCurve& s, const Quotient& q, std::size_t min_gap,
                                double threshold) {
  constexpr std::size_t kChunk = 64;
  const std::size_t n = s.segments();
  const auto boxes = detail::chunk_boxes(s, kChunk);
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    for (std::size_t b = a; b < boxes.size(); ++b) {
      if (detail::box_gap(boxes[a], boxes[b], q) > threshold) continue;
      for (std::size_t i = boxes[a].lo; i < boxes[a].hi; ++i) {
        for (std::size_t j = std::max(i + 1, boxes[b].lo); j < boxes[b].hi; ++j) {
          const std::size_t gap = std::min(j - i, n - (j - i));
          if (gap < min_gap) continue;
          const double d = detail::quotient_segment_distance(s, i, s, j, q);
          if (threshold == 0.0 ? d == 0.0 : d <= threshold) return false;
        }
      }
    }
  }
  return true;
}

inline void PolylineCurve::check_injective() const {
  const std::size_t n = vertices_.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = vertex(j + 1) - vertex(j);
    const Complex b = vertex(j + 2) - vertex(j + 1);
    if (cross(a, b) == 0.0 && (a * std::conj(b)).real() < 0.0) {
      throw InvalidInput("polyline: folds back on itself at vertex " + std::to_string((j + 1) % n));
    }
  }
  // Only integer axis-aligned periods define a quotient we can test in; other
  // periods are checked in the plane over three consecutive periods.
  const SampledCurve s = sample(*this);
  bool ok = true;
  if (period_ == Complex{0, 1} || period_ == Complex{0, -1} || period_ == Complex{1, 0} ||
      period_ == Complex{-1, 0}) {
    ok = sampled_is_embedded(s, Quotient::along(period_), 2, 0.0);
  } else {
    SampledCurve wide;
    for (int r = -1; r <= 1; ++r) {
      for (std::size_t j = 0; j < s.segments(); ++j) wide.points.push_back(s.points[j] + period_ * double(r));
    }
    wide.points.push_back(s.points.back() + period_);
    wide.params.assign(wide.points.size(), 0.0);
    ok = sampled_is_embedded(wide, Quotient::plane(), 2, 0.0);
  }
  if (!ok) throw InvalidInput("polyline: self-intersecting");
}

// ---------------------------------------------------------------------------
// Regularity and embedding

/// Certified lower bound on min |f'| from a grid of n samples (may be <= 0).
inline double min_speed_lower_bound(const FourierCurve& c, std::size_t n) {
  const auto [pos, vel] = c.grid_jets(n);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : vel) m = std::min(m, std::abs(v));
  return m - c.acceleration_bound() * 0.5 / static_cast<double>(n);
}

/// Numerical embedding check for a smooth curve in the given quotient. The curve
/// is locally injective over parameter windows of length v_min / A; beyond that,
/// sampled chords closer than twice the chord deviation count as a collision.
inline bool is_embedded(const FourierCurve& c, const Quotient& q,
                        std::size_t max_samples = std::size_t{1} << 16) {
  const std::size_t n = fourier_sample_count(c, 1e-9, max_samples);
  const double vmin = min_speed_lower_bound(c, n);
  if (vmin <= 0.0) return false;
  const double a = c.acceleration_bound();
  const double h = 1.0 / static_cast<double>(n);
  std::size_t min_gap = 2;
  if (a > 0.0) {
    const double window = vmin / a;
    const double g = std::floor(window / h) - 2.0;
    if (g < 2.0) return false;  // resolution too coarse to certify
    min_gap = static_cast<std::size_t>(g);
  }
  const SampledCurve s = sample(c, n);
  if (a == 0.0) return sampled_is_embedded(s, q, min_gap, 0.0);
  return sampled_is_embedded(s, q, min_gap, 2.0 * s.deviation);
}

inline bool is_embedded(const PolylineCurve& c, const Quotient& q) {
  return sampled_is_embedded(sample(c), q, 2, 0.0);
}

inline bool is_embedded(const Curve& c, const Quotient& q) {
  return std::visit([&](const auto& x) { return is_embedded(x, q); }, c);
}

// ---------------------------------------------------------------------------
// Distances and invariants

inline SampledCurve certified_sample(const FourierCurve& c) {
  return sample(c, fourier_sample_count(c, 1e-7));
}
inline SampledCurve certified_sample(const PolylineCurve& c) { return sample(c); }
inline SampledCurve certified_sample(const Curve& c) {
  return std::visit([](const auto& x) { return certified_sample(x); }, c);
}

/// Certified lower bound on the quotient distance between the two images: exact
/// chord distance minus both chord deviations. Zero when the images meet.
inline double min_distance(const SampledCurve& f, const SampledCurve& g, const Quotient& q) {
  const double d = polyline_distance(f, g, q);
  return std::max(0.0, d - f.deviation - g.deviation);
}

template <class F, class G>
double min_distance(const F& f, const G& g, const Quotient& q = Quotient::torus()) {
  return min_distance(certified_sample(f), certified_sample(g), q);
}

/// Transverse half-width of a curve whose period is axis-aligned: max |x| for a
/// vertical period, max |y| for a horizontal one.
inline double transverse(Complex p, Complex period) {
  if (period.real() == 0.0 && period.imag() != 0.0) return std::abs(p.real());
  if (period.imag() == 0.0 && period.real() != 0.0) return std::abs(p.imag());
  throw InvalidInput("strip half-width needs an axis-aligned period");
}

inline double strip_halfwidth(const PolylineCurve& c) {
  double m = 0.0;
  for (const auto& v : c.vertices()) m = std::max(m, transverse(v, c.period()));
  return m;
}

/// Upper bound: sampled maximum plus chord deviation.
inline double strip_halfwidth(const FourierCurve& c) {
  const SampledCurve s = certified_sample(c);
  double m = 0.0;
  for (const auto& p : s.points) m = std::max(m, transverse(p, c.period()));
  return m + s.deviation;
}

/// Area height (closed integral of y dx) mod 1 of a class-(1,0) loop, by the
/// trapezoid rule, which is exact for the trigonometric-polynomial integrand at
/// the chosen node count.
inline double hamiltonian_height(const FourierCurve& c) {
  if (c.winding() != Winding{1, 0}) throw InvalidInput("hamiltonian_height: class must be (1,0)");
  std::size_t per = detail::next_pow2(std::max<std::size_t>(2048, 4 * (c.order() + 1)));
  const std::size_t n = per * static_cast<std::size_t>(c.stride());
  const auto [pos, vel] = c.grid_jets(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += pos[j].imag() * vel[j].real();
  return wrap_unit(sum / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Mollification

struct MollifyResult {
  FourierCurve curve;
  double c0_bound = 0.0;     // certified sup-distance bound to the input parameterization
  double c0_measured = 0.0;  // dense-grid sup distance, for reporting
};

namespace detail {

/// Normalized bump exp(-1 / (1 - u^2)) on (-1, 1), tabulated for trapezoid quadrature.
struct BumpTable {
  std::vector<double> u;
  std::vector<double> weight;  // phi(u) * du, sums to 1
  double first_moment = 0.0;   // integral |u| phi
  double second_derivative_l1 = 0.0;

  static const BumpTable& get() {
    static const BumpTable table = [] {
      BumpTable t;
      constexpr int kNodes = 2048;
      const double du = 2.0 / kNodes;
      std::vector<double> phi;
      for (int q = 1; q < kNodes; ++q) {
        const double u = -1.0 + q * du;
        t.u.push_back(u);
        phi.push_back(std::exp(-1.0 / (1.0 - u * u)));
      }
      double mass = 0.0;
      for (double p : phi) mass += p * du;
      for (std::size_t q = 0; q < phi.size(); ++q) {
        t.weight.push_back(phi[q] * du / mass);
        t.first_moment += std::abs(t.u[q]) * t.weight.back();
      }
      for (std::size_t q = 1; q + 1 < phi.size(); ++q) {
        t.second_derivative_l1 += std::abs(phi[q + 1] - 2.0 * phi[q] + phi[q - 1]) / (du * du) * du / mass;
      }
      return t;
    }();
    return table;
  }
};

/// Fourier transform of the width-w bump at harmonics 0..kmax.
inline std::vector<double> bump_transform(double width, std::size_t kmax) {
  const auto& tab = BumpTable::get();
  const std::size_t nq = tab.u.size();
  std::vector<double> out(kmax + 1, 0.0);
  std::vector<double> c1(nq), ck(nq, 1.0), sk(nq, 0.0), s1(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    c1[q] = std::cos(kTwoPi * width * tab.u[q]);
    s1[q] = std::sin(kTwoPi * width * tab.u[q]);
  }
  out[0] = 1.0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    double acc = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      const double c = ck[q] * c1[q] - sk[q] * s1[q];
      sk[q] = sk[q] * c1[q] + ck[q] * s1[q];
      ck[q] = c;
      acc += tab.weight[q] * c;
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace detail

/// Bump-kernel smoothing of the polyline's periodic part followed by the exact
/// L2 Fourier projection at order M. Throws EmbeddingLost if the result is not
/// embedded in the quotient by the period.
inline MollifyResult mollify(const PolylineCurve& curve, double width, int order) {
  if (!(width > 0.0)) throw InvalidInput("mollify: width must be positive");
  if (order < 0) throw InvalidInput("mollify: order must be >= 0");
  const Complex period = curve.period();
  const Winding winding{static_cast<int>(std::lround(period.real())),
                        static_cast<int>(std::lround(period.imag()))};
  if (period != Complex(winding[0], winding[1])) throw InvalidInput("mollify: period must be a lattice vector");

  const std::size_t n = curve.size();
  const double nn = static_cast<double>(n);
  // Periodic part Q(t) = position(t) - period * t is piecewise linear with slope s_j.
  std::vector<Complex> slope(n), knot(n + 1);
  for (std::size_t j = 0; j < n; ++j) slope[j] = nn * (curve.vertex(j + 1) - curve.vertex(j)) - period;
  for (std::size_t j = 0; j <= n; ++j) knot[j] = curve.vertex(j) - period * (static_cast<double>(j) / nn);

  const auto m = static_cast<std::size_t>(order);
  // hat(k) = sum_j s_j (e^{-2 pi i k t_j} - e^{-2 pi i k t_{j+1}}) / (2 pi i k)^2
  auto coefficient = [&](long k) {
    const Complex i{0.0, 1.0};
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const double t0 = static_cast<double>(j) / nn, t1 = static_cast<double>(j + 1) / nn;
      acc += slope[j] * (std::exp(-i * (kTwoPi * k * t0)) - std::exp(-i * (kTwoPi * k * t1)));
    }
    const Complex d = i * (kTwoPi * static_cast<double>(k));
    return acc / (d * d);
  };
  Complex mean{};
  for (std::size_t j = 0; j < n; ++j) mean += 0.5 * (knot[j] + knot[j + 1]) / nn;

  const std::size_t exact_tail = 4 * std::max<std::size_t>(m, 1);
  const auto kernel = detail::bump_transform(width, m + exact_tail);
  std::vector<Complex> cs(m + 1), sn(m + 1);
  cs[0] = mean;
  for (std::size_t k = 1; k <= m; ++k) {
    const Complex plus = coefficient(static_cast<long>(k));
    const Complex minus = coefficient(-static_cast<long>(k));
    cs[k] = (plus + minus) * kernel[k];
    sn[k] = Complex{0.0, 1.0} * (plus - minus) * kernel[k];
  }
  FourierCurve smooth(winding, std::move(cs), std::move(sn));

  // |Q - K*Q| <= Lip(Q) * w * E|u|, and the truncation tail uses
  // |hat(k)| <= J / (2 pi k)^2 with J the total slope jump.
  const auto& tab = detail::BumpTable::get();
  double lip = 0.0, jump = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    lip = std::max(lip, std::abs(slope[j]));
    jump += std::abs(slope[(j + 1) % n] - slope[j]);
  }
  double tail = 0.0;
  for (std::size_t k = m + 1; k <= m + exact_tail; ++k) {
    const double kk = static_cast<double>(k);
    tail += 2.0 * jump / (4.0 * kPi * kPi * kk * kk) * std::abs(kernel[k]);
  }
  {
    // Beyond the tabulated range |K(k)| <= ||phi''||_1 / (2 pi k w)^2.
    const double k0 = static_cast<double>(m + exact_tail);
    const double c = 2.0 * jump / (4.0 * kPi * kPi) * tab.second_derivative_l1 /
                     (4.0 * kPi * kPi * width * width);
    tail += c / (3.0 * k0 * k0 * k0);
  }
  const double bound = lip * width * tab.first_moment + tail;

  const std::size_t grid = std::max<std::size_t>(4096, detail::next_pow2(8 * (m + 1)));
  const auto [pos, vel] = smooth.grid_jets(grid);
  double measured = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    measured = std::max(measured, std::abs(pos[j] - curve.position(static_cast<double>(j) / double(grid))));
  }

  Quotient q = Quotient::plane();
  try {
    q = Quotient::along(period);
  } catch (const InvalidInput&) {
  }
  if (!is_embedded(smooth, q)) throw EmbeddingLost("mollify: smoothed curve is not embedded");
  return {std::move(smooth), bound, measured};
}

// ---------------------------------------------------------------------------
// Rescaling onto the torus

/// -i z: turns the vertical period (0, 1) into the horizontal class (1, 0).
inline Complex to_internal_frame(Complex z) { return Complex{0.0, -1.0} * z; }
inline Complex from_internal_frame(Complex z) { return Complex{0.0, 1.0} * z; }

/// t -> (1/N) f(N t) mod Z[i], rotated into the internal frame.
inline PolylineCurve rescale_to_torus(const PolylineCurve& c, int n_scale) {
  if (n_scale < 1) throw InvalidInput("rescale: N must be >= 1");
  if (c.period() != Complex{0.0, 1.0}) throw InvalidInput("rescale: period must be (0,1)");
  std::vector<Complex> v;
  v.reserve(c.size() * static_cast<std::size_t>(n_scale));
  const double inv = 1.0 / n_scale;
  for (std::size_t j = 0; j < c.size() * static_cast<std::size_t>(n_scale); ++j) {
    v.push_back(to_internal_frame(c.vertex(j) * inv));
  }
  return PolylineCurve(std::move(v), Complex{1.0, 0.0});
}

inline FourierCurve rescale_to_torus(const FourierCurve& c, int n_scale) {
  if (n_scale < 1) throw InvalidInput("rescale: N must be >= 1");
  if (c.winding() != Winding{0, 1}) throw InvalidInput("rescale: period must be (0,1)");
  const double inv = 1.0 / n_scale;
  std::vector<Complex> cs(c.cos_terms().size()), sn(c.sin_terms().size());
  for (std::size_t k = 0; k < cs.size(); ++k) {
    cs[k] = to_internal_frame(c.cos_terms()[k] * inv);
    sn[k] = to_internal_frame(c.sin_terms()[k] * inv);
  }
  return {{1, 0}, std::move(cs), std::move(sn), c.stride() * n_scale};
}

}  // namespace peg
