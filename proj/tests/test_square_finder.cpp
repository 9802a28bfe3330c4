#include <gtest/gtest.h>

#include <random>

#include "squarepeg/curves.hpp"
#include "squarepeg/fixtures.hpp"
#include "squarepeg/square_finder.hpp"

using namespace peg;

namespace {

struct Perturbed {
  FourierCurve f, g;
};

Perturbed perturbed(std::uint64_t seed) {
  const auto p = generate_fixture("perturbed", seed);
  return {std::get<FourierCurve>(p.f), std::get<FourierCurve>(p.g)};
}

double family_distance(const SquareParams& p, double gap) {
  // Distance to {(s, s - gap, s, s - gap)} using s = a1.
  const double s = p.a1;
  return param_distance(p, SquareParams::from({s, s - gap, s, s - gap}));
}

}  // namespace

TEST(Residual, VanishesOnModelFamily) {
  const auto f = FourierCurve::line(0.0), g = FourierCurve::line(0.25);
  const auto r = residual(f, g, SquareParams::from({0.6, 0.35, 0.6, 0.35}));
  for (double x : r) EXPECT_LT(std::abs(x), 1e-15);
}

TEST(Residual, NonzeroOffTheFamily) {
  const auto f = FourierCurve::line(0.0), g = FourierCurve::line(0.25);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto p = SquareParams::from({unit_uniform(rng), unit_uniform(rng), unit_uniform(rng), unit_uniform(rng)});
    if (family_distance(p, 0.25) < 1e-3) continue;
    EXPECT_GT(detail::norm(residual(f, g, p)), 1e-6);
  }
}

TEST(Jacobian, ConstantForStraightLoops) {
  const auto f = FourierCurve::line(0.1), g = FourierCurve::line(0.45);
  const Jacobian j0 = jacobian(f, g, SquareParams::from({0.1, 0.2, 0.3, 0.4}));
  const Jacobian j1 = jacobian(f, g, SquareParams::from({0.7, 0.05, 0.9, 0.6}));
  EXPECT_LT((j0 - j1).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Jacobian, MatchesCentralDifferences) {
  const auto c = perturbed(9);
  std::mt19937_64 rng(10);
  const double h = 1e-5;
  for (int k = 0; k < 50; ++k) {
    const std::array<double, 4> base{unit_uniform(rng), unit_uniform(rng), unit_uniform(rng), unit_uniform(rng)};
    const Jacobian j = jacobian(c.f, c.g, SquareParams::from(base));
    for (int col = 0; col < 4; ++col) {
      auto plus = base, minus = base;
      plus[col] += h;
      minus[col] -= h;
      const auto rp = residual(c.f, c.g, SquareParams::from(plus));
      const auto rm = residual(c.f, c.g, SquareParams::from(minus));
      for (int row = 0; row < 4; ++row) {
        const double fd = (rp[row] - rm[row]) / (2.0 * h);
        // Minimal representatives jump by 1 across the cut; skip those stencils.
        if (std::abs(fd) > 1e3) continue;
        EXPECT_NEAR(j(row, col), fd, 1e-6);
      }
    }
  }
}

TEST(Jacobian, RankThreeOnModelFamily) {
  const auto f = FourierCurve::line(0.0), g = FourierCurve::line(0.25);
  for (double s : {0.0, 0.3, 0.8}) {
    const Jacobian j = jacobian(f, g, SquareParams::from({s, s - 0.25, s, s - 0.25}));
    Eigen::JacobiSVD<Jacobian> svd(j);
    const auto sv = svd.singularValues();
    EXPECT_GT(sv(2), 0.1);
    EXPECT_LT(sv(3), 1e-14);
    // The null direction is the family tangent (1, 1, 1, 1).
    EXPECT_LT((j * Eigen::Vector4d::Ones()).norm(), 1e-14);
  }
}

TEST(SolveAll, ModelFamilyMatchesClosedForm) {
  for (double gap : {0.1, 0.25, 0.5}) {
    const auto sols = solve_all(FourierCurve::line(0.0), FourierCurve::line(gap));
    ASSERT_FALSE(sols.empty());
    for (const auto& s : sols) {
      EXPECT_TRUE(s.degenerate_family);
      EXPECT_LT(family_distance(s.params, gap), 1e-8);
      EXPECT_NEAR(s.side, gap, 1e-10);
      EXPECT_TRUE(verify_square_planar(s));
    }
  }
}

TEST(SolveAll, PerturbedSolutionsAreSquares) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const auto c = perturbed(seed);
    const auto sols = solve_all(c.f, c.g);
    const double eps = min_distance(c.f, c.g);
    ASSERT_FALSE(sols.empty());
    for (std::size_t k = 0; k < sols.size(); ++k) {
      const auto& s = sols[k];
      EXPECT_LT(s.residual_norm, 1e-10);
      EXPECT_TRUE(verify_square_planar(s));
      EXPECT_GE(s.side, eps);
      EXPECT_NEAR(std::abs(s.corners[3] - s.corners[0]), s.side, 1e-8);
      for (double x : s.params.as_array()) {
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
      }
      if (k > 0) {
        EXPECT_LT(sols[k - 1].params.as_array(), s.params.as_array());
      }
    }
  }
}

TEST(SolveAll, StableUnderGridDoubling) {
  const auto c = perturbed(5);
  SolverConfig coarse, fine;
  fine.grid_resolution = 2 * coarse.grid_resolution;
  const auto a = solve_all(c.f, c.g, coarse), b = solve_all(c.f, c.g, fine);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LT(param_distance(a[k].params, b[k].params), 1e-6);
}

TEST(SolveAll, FollowsReparameterization) {
  const auto c = perturbed(6);
  const double s = 0.37;
  const auto a = solve_all(c.f, c.g);
  const auto b = solve_all(c.f.shifted(s), c.g.shifted(s));
  ASSERT_EQ(a.size(), b.size());
  for (const auto& x : a) {
    const auto p = x.params.as_array();
    const auto moved = SquareParams::from({p[0] - s, p[1] - s, p[2] - s, p[3] - s});
    const bool found =
        std::any_of(b.begin(), b.end(), [&](const auto& y) { return param_distance(y.params, moved) < 1e-6; });
    EXPECT_TRUE(found);
  }
}

TEST(SolveAll, WorksOnPolylineLoops) {
  const auto lines = generate_fixture("lines", 0);
  const auto f = rescale_to_torus(std::get<PolylineCurve>(lines.f), 4);
  const auto g = rescale_to_torus(std::get<PolylineCurve>(lines.g), 4);
  const auto sols = solve_all(f, g);
  ASSERT_FALSE(sols.empty());
  for (const auto& s : sols) {
    EXPECT_NEAR(s.side, 0.1, 1e-12);
    EXPECT_TRUE(s.degenerate_family);
  }
}

TEST(SolveAll, RejectsBadConfig) {
  SolverConfig cfg;
  cfg.grid_resolution = 0;
  EXPECT_THROW(solve_all(FourierCurve::line(0.0), FourierCurve::line(0.5), cfg), InvalidInput);
}

TEST(Bijection, ClosedFormPoint) {
  const auto f = FourierCurve::line(0.0), g = FourierCurve::line(0.25);
  SquareSolution s;
  s.params = SquareParams::from({0.0, -0.25, 0.0, -0.25});
  const TorusPair pt = to_intersection_point(f, g, s);
  EXPECT_NEAR(pt.first.x(), 0.75, 1e-15);
  EXPECT_NEAR(pt.first.y(), 0.0, 1e-15);
  EXPECT_NEAR(pt.second.x(), 0.75, 1e-15);
  EXPECT_NEAR(pt.second.y(), 0.25, 1e-15);
}

TEST(Bijection, RoundTripThroughIntersection) {
  const auto c = perturbed(7);
  for (const auto& s : solve_all(c.f, c.g)) {
    const TorusPair pt = to_intersection_point(c.f, c.g, s);
    EXPECT_LT(param_distance(params_from_intersection(c.f, c.g, pt), s.params), 1e-9);
  }
}

TEST(Bijection, ViolationDetected) {
  const auto f = FourierCurve::line(0.0), g = FourierCurve::line(0.25);
  SquareSolution s;
  s.params = SquareParams::from({0.0, 0.5, 0.0, 0.5});
  EXPECT_THROW(to_intersection_point(f, g, s), BijectionViolated);
}

TEST(VerifyPlanar, Examples) {
  const std::array<Complex, 4> sq{{{0, 0}, {0, 0.25}, {-0.25, 0.25}, {-0.25, 0}}};
  EXPECT_TRUE(verify_square_planar(sq));
  auto bent = sq;
  bent[2] += Complex{1e-3, 0.0};
  EXPECT_FALSE(verify_square_planar(bent));
  const std::array<Complex, 4> point{};
  EXPECT_FALSE(verify_square_planar(point));
}

TEST(GeometricCount, ModelRepresentativesAreDistinctSquares) {
  const auto sols = solve_all(FourierCurve::line(0.0), FourierCurve::line(0.25));
  EXPECT_EQ(count_geometric_squares(sols), sols.size());
}
