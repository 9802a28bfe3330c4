// Square inscribed between two vertical zigzags, found by smoothing,
// shrinking onto the torus and following one square down the schedule.

#include <cstdio>

#include "squarepeg/squarepeg.hpp"

int main() {
  const auto pair = peg::generate_fixture("zigzag", 3);
  const auto& f = std::get<peg::PolylineCurve>(pair.f);
  const auto& g = std::get<peg::PolylineCurve>(pair.g);

  const auto report = peg::run(f, g);
  std::printf("lambda=%.4f  N=%d  epsilon=%.6f\n", report.lambda, report.n_scale, report.epsilon);
  for (const auto& level : report.levels) {
    std::printf("  width %-7g order %-5d squares %-3zu movement %g\n", level.width, level.order, level.squares.size(),
                level.movement.value_or(0.0));
  }
  const auto& sq = report.converged_square;
  std::printf("%s, side %.9f\n", report.converged ? "converged" : "not converged", sq.side);
  for (const auto& c : sq.corners) std::printf("  (%.9f, %.9f)\n", c.real(), c.imag());
}
