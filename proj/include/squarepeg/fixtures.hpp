#pragma once

// Seeded curve pairs for tests, demos and the `generate` command.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "squarepeg/curve_io.hpp"
#include "squarepeg/curves.hpp"
#include "squarepeg/errors.hpp"
#include "squarepeg/model_verifier.hpp"

namespace peg {

inline const std::vector<std::string>& fixture_families() {
  static const std::vector<std::string> names{"model", "perturbed", "zigzag", "lines"};
  return names;
}

namespace detail {

/// Random trigonometric bump of total magnitude `amp` spread over modes 1..modes.
inline void add_modes(std::mt19937_64& rng, std::vector<Complex>& cos_terms, std::vector<Complex>& sin_terms,
                      int modes, double transverse, double tangential) {
  cos_terms.resize(modes + 1);
  sin_terms.resize(modes + 1);
  std::vector<double> wt(modes), wn(modes);
  double st = 0.0, sn = 0.0;
  for (int k = 0; k < modes; ++k) {
    wt[k] = 0.1 + unit_uniform(rng);
    wn[k] = 0.1 + unit_uniform(rng);
    st += wt[k];
    sn += wn[k];
  }
  for (int k = 1; k <= modes; ++k) {
    const double pt = kTwoPi * unit_uniform(rng);
    const double pn = kTwoPi * unit_uniform(rng);
    const double at = tangential * wt[k - 1] / st;
    const double an = transverse * wn[k - 1] / sn;
    cos_terms[k] += Complex{at * std::cos(pt), an * std::cos(pn)};
    sin_terms[k] += Complex{at * std::sin(pt), an * std::sin(pn)};
  }
}

inline PolylineCurve zigzag(double center, double amplitude, int teeth, double phase) {
  std::vector<Complex> pts;
  const int n = 2 * teeth;
  for (int j = 0; j < n; ++j) {
    const double x = center + ((j % 2 == 0) ? -amplitude : amplitude);
    pts.push_back({x, (static_cast<double>(j) + phase) / n});
  }
  return PolylineCurve(std::move(pts), {0.0, 1.0});
}

}  // namespace detail

/// model:     straight loops f0(t) = t + alpha i and g0(t) = t + beta i.
/// perturbed: f0(t), g0(t) with alpha = 0, beta = 1/2 plus random modes 1..3
///            (transverse size in [0.02, 0.05], tangential 0.01).
/// zigzag:    vertical zigzag polylines around x = -0.2 and x = 0.2, amplitude 0.05.
/// lines:     vertical polylines x = -0.2 and x = 0.2.
inline CurvePair generate_fixture(const std::string& family, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (family == "model") {
    const double alpha = unit_uniform(rng);
    const double gap = 0.1 + 0.4 * unit_uniform(rng);
    return {FourierCurve::line(alpha), FourierCurve::line(detail::guarded_unit(wrap_unit(alpha + gap)))};
  }
  if (family == "perturbed") {
    std::vector<Complex> fc{{0.0, 0.0}}, fs, gc{{0.0, 0.5}}, gs;
    const double af = 0.02 + 0.03 * unit_uniform(rng);
    const double ag = 0.02 + 0.03 * unit_uniform(rng);
    detail::add_modes(rng, fc, fs, 3, af, 0.01);
    detail::add_modes(rng, gc, gs, 3, ag, 0.01);
    return {FourierCurve({1, 0}, fc, fs), FourierCurve({1, 0}, gc, gs)};
  }
  if (family == "zigzag") {
    const int tf = 2 + static_cast<int>(rng() % 4);
    const int tg = 2 + static_cast<int>(rng() % 4);
    const double phase = unit_uniform(rng);
    return {detail::zigzag(-0.2, 0.05, tf, 0.0), detail::zigzag(0.2, 0.05, tg, phase)};
  }
  if (family == "lines") {
    return {PolylineCurve({{-0.2, 0.0}}, {0.0, 1.0}), PolylineCurve({{0.2, 0.0}}, {0.0, 1.0})};
  }
  throw InvalidInput("unknown family '" + family + "'");
}

}  // namespace peg
