// Squares between two wiggly horizontal loops on the torus, plus the
// straight-loop identities behind the count.

#include <cstdio>

#include "squarepeg/squarepeg.hpp"

int main() {
  const auto pair = peg::generate_fixture("perturbed", 7);
  const auto& f = std::get<peg::FourierCurve>(pair.f);
  const auto& g = std::get<peg::FourierCurve>(pair.g);

  const auto squares = peg::solve_all(f, g);
  std::printf("%zu squares\n", squares.size());
  for (const auto& s : squares) {
    std::printf("  a1=%.6f a2=%.6f b1=%.6f b2=%.6f side=%.6f sigma_min=%.3g\n", s.params.a1, s.params.a2,
                s.params.b1, s.params.b2, s.side, s.jacobian_min_singular_value);
  }

  const auto r = peg::verify_model(0.7, 0.3);
  std::printf("mu=%.3f delta=%.3f  HF factors %d x %d = %d  measured cover factor %.3f\n", r.model.mu, r.model.delta,
              r.hf_factors[0], r.hf_factors[1], r.hf_product, r.cover_scale_factor);
}
