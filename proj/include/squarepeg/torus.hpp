#pragma once

// Arithmetic on the square torus C/Z[i] and on the product (C/Z[i])^2.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "squarepeg/errors.hpp"

namespace peg {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Representative of x modulo 1 in [0, 1).
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  // x - floor(x) rounds to 1.0 for tiny negative x.
  if (r >= 1.0) r = 0.0;
  return r;
}

/// Representative of x modulo 1 in (-1/2, 1/2].
inline double wrap_centered(double x) {
  double r = x - std::ceil(x - 0.5);
  if (r <= -0.5) r += 1.0;
  return r;
}

/// Minimal representative of a planar difference modulo Z[i], componentwise in (-1/2, 1/2].
inline Complex minimal_rep(Complex d) {
  return {wrap_centered(d.real()), wrap_centered(d.imag())};
}

/// Planar area of the parallelogram spanned by two vectors.
inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

class TorusPoint {
 public:
  TorusPoint() = default;
  TorusPoint(double x, double y) : x_(wrap_unit(x)), y_(wrap_unit(y)) {}

  double x() const { return x_; }
  double y() const { return y_; }
  Complex lift() const { return {x_, y_}; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

struct TorusPair {
  TorusPoint first;
  TorusPoint second;

  friend bool operator==(const TorusPair&, const TorusPair&) = default;
};

struct TangentPair {
  Complex u1;
  Complex u2;
};

/// Quotient of a planar point by Z[i]. Throws InvalidInput on non-finite input.
inline TorusPoint reduce(Complex p) {
  if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
    throw InvalidInput("reduce: non-finite coordinate");
  }
  return {p.real(), p.imag()};
}

/// Lattice translate of p nearest to anchor. Ties go to the lexicographically
/// smallest translate (x first, then y).
inline Complex lift_near(TorusPoint p, Complex anchor) {
  const double dx = anchor.real() - p.x();
  const double dy = anchor.imag() - p.y();
  const std::array<double, 2> kx{std::floor(dx), std::ceil(dx)};
  const std::array<double, 2> ky{std::floor(dy), std::ceil(dy)};
  Complex best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (double ix : kx) {
    for (double iy : ky) {
      const Complex c{p.x() + ix, p.y() + iy};
      const double d2 = std::norm(c - anchor);
      const bool smaller = c.real() < best.real() ||
                           (c.real() == best.real() && c.imag() < best.imag());
      if (d2 < best_d2 || (d2 == best_d2 && smaller)) {
        best = c;
        best_d2 = d2;
      }
    }
  }
  return best;
}

/// Flat distance on the torus: minimum over lattice translates.
inline double torus_distance(TorusPoint p, TorusPoint q) {
  return std::abs(minimal_rep(p.lift() - q.lift()));
}

/// Max of the two factor distances.
inline double torus_distance(const TorusPair& p, const TorusPair& q) {
  return std::max(torus_distance(p.first, q.first), torus_distance(p.second, q.second));
}

// tau(a, b) = (a + i(b - a), b + i(b - a)) is the Gaussian-integer matrix
// [[1 - i, i], [-i, 1 + i]] with determinant 1, so it descends to the torus
// and its inverse [[1 + i, -i], [i, 1 - i]] does too.
namespace detail {
inline constexpr Complex kI{0.0, 1.0};
}

inline TorusPair tau(const TorusPair& z) {
  using detail::kI;
  const Complex a = z.first.lift();
  const Complex b = z.second.lift();
  return {reduce(a + kI * (b - a)), reduce(b + kI * (b - a))};
}

inline TorusPair tau_inverse(const TorusPair& z) {
  using detail::kI;
  const Complex a = z.first.lift();
  const Complex b = z.second.lift();
  return {reduce((1.0 + kI) * a - kI * b), reduce(kI * a + (1.0 - kI) * b)};
}

/// Differential of tau (constant, complex linear).
inline TangentPair tau_differential(const TangentPair& u) {
  using detail::kI;
  return {(1.0 - kI) * u.u1 + kI * u.u2, -kI * u.u1 + (1.0 + kI) * u.u2};
}

/// c(x, y) = (x + conj(y), conj(x) - y).
inline TorusPair covering_c(const TorusPair& z) {
  const Complex x = z.first.lift();
  const Complex y = z.second.lift();
  return {reduce(x + std::conj(y)), reduce(std::conj(x) - y)};
}

/// Differential of c (constant, real linear).
inline TangentPair covering_differential(const TangentPair& u) {
  return {u.u1 + std::conj(u.u2), std::conj(u.u1) - u.u2};
}

/// Simultaneous translation of both factors; the deck group of c.
struct DeckMap {
  Complex shift;

  TorusPair operator()(const TorusPair& z) const {
    return {reduce(z.first.lift() + shift), reduce(z.second.lift() + shift)};
  }

  /// Composition is translation by the sum, reduced.
  DeckMap then(const DeckMap& other) const {
    return {reduce(shift + other.shift).lift()};
  }

  friend bool operator==(const DeckMap&, const DeckMap&) = default;
};

/// Identity, then translations by 1/2, i/2 and (1 + i)/2.
inline std::array<DeckMap, 4> deck_transformations() {
  return {DeckMap{{0.0, 0.0}}, DeckMap{{0.5, 0.0}}, DeckMap{{0.0, 0.5}}, DeckMap{{0.5, 0.5}}};
}

/// omega_pm = pi_1^* omega - pi_2^* omega. The form is constant, so `at` is unused.
inline double omega_pm(const TorusPair& /*at*/, const TangentPair& u, const TangentPair& v) {
  return cross(u.u1, v.u1) - cross(u.u2, v.u2);
}

}  // namespace peg
