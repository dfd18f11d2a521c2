// Compiled with -mavx2 (see src/CMakeLists.txt). Only reached through the
// dispatch table after a CPUID check.
#include "evoflow/kernels.hpp"

#include <immintrin.h>

#include <bit>
#include <limits>

namespace evoflow::kernels::avx2 {

namespace {

template <int Predicate>
std::size_t count_cmp(std::span<const double> values, double x) noexcept {
  const double* p = values.data();
  const std::size_t n = values.size();
  const __m256d vx = _mm256_set1_pd(x);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const int m0 = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + i), vx, Predicate));
    const int m1 = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + i + 4), vx, Predicate));
    const int m2 = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + i + 8), vx, Predicate));
    const int m3 = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + i + 12), vx, Predicate));
    const unsigned packed = static_cast<unsigned>(m0 | (m1 << 4) | (m2 << 8) | (m3 << 12));
    count += static_cast<std::size_t>(std::popcount(packed));
  }
  for (; i + 4 <= n; i += 4) {
    const int m = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + i), vx, Predicate));
    count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(m)));
  }
  for (; i < n; ++i) {
    if constexpr (Predicate == _CMP_LT_OQ) {
      count += static_cast<std::size_t>(p[i] < x);
    } else {
      count += static_cast<std::size_t>(p[i] <= x);
    }
  }
  return count;
}

}  // namespace

std::size_t count_less(std::span<const double> values, double x) noexcept {
  return count_cmp<_CMP_LT_OQ>(values, x);
}

std::size_t count_less_equal(std::span<const double> values, double x) noexcept {
  return count_cmp<_CMP_LE_OQ>(values, x);
}

std::size_t argmin(std::span<const double> values) noexcept {
  const double* p = values.data();
  const std::size_t n = values.size();
  if (n < 8) return scalar::argmin(values);

  // Pass 1: minimum value.
  __m256d lo0 = _mm256_loadu_pd(p);
  __m256d lo1 = _mm256_loadu_pd(p + 4);
  std::size_t i = 8;
  for (; i + 8 <= n; i += 8) {
    lo0 = _mm256_min_pd(lo0, _mm256_loadu_pd(p + i));
    lo1 = _mm256_min_pd(lo1, _mm256_loadu_pd(p + i + 4));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_min_pd(lo0, lo1));
  double best = lanes[0];
  for (int k = 1; k < 4; ++k) best = lanes[k] < best ? lanes[k] : best;
  for (; i < n; ++i) best = p[i] < best ? p[i] : best;

  // Pass 2: first position holding it.
  const __m256d vb = _mm256_set1_pd(best);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int m = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(p + j), vb, _CMP_EQ_OQ));
    if (m != 0) return j + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(m)));
  }
  for (; j < n; ++j) {
    if (p[j] == best) return j;
  }
  return 0;  // unreachable for NaN-free input
}

void stencil_interior(std::span<const double> in, std::span<double> out,
                      StencilCoeffs c) noexcept {
  if (in.size() < 3) return;
  const std::size_t last = in.size() - 1;
  const double* src = in.data();
  double* dst = out.data();
  const __m256d up = _mm256_set1_pd(c.up);
  const __m256d stay = _mm256_set1_pd(c.stay);
  const __m256d down = _mm256_set1_pd(c.down);
  std::size_t j = 1;
  for (; j + 4 <= last; j += 4) {
    const __m256d left = _mm256_mul_pd(up, _mm256_loadu_pd(src + j - 1));
    const __m256d centre = _mm256_mul_pd(stay, _mm256_loadu_pd(src + j));
    const __m256d right = _mm256_mul_pd(down, _mm256_loadu_pd(src + j + 1));
    _mm256_storeu_pd(dst + j, _mm256_add_pd(_mm256_add_pd(left, centre), right));
  }
  for (; j < last; ++j) {
    const double left = c.up * src[j - 1];
    const double centre = c.stay * src[j];
    const double right = c.down * src[j + 1];
    dst[j] = (left + centre) + right;
  }
}

}  // namespace evoflow::kernels::avx2
