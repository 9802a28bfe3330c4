#pragma once

// Thin RAII wrapper over FFTW for the one transform the library needs:
// evaluating a trigonometric polynomial on a uniform grid.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

namespace peg::detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// out[j] = sum_k in[k] exp(+2 pi i k j / n). In-place over a copy.
inline std::vector<std::complex<double>> inverse_dft(std::vector<std::complex<double>> data) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return data;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    // The FFTW planner is not thread safe; execution is.
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return data;
}

/// Smallest power of two >= n.
inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace peg::detail
