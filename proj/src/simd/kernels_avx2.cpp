// SPDX-License-Identifier: Apache-2.0
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace escale::simd {
namespace {

// Four-lane accumulators, two of them to hide add latency. The tail is
// folded in scalar after the horizontal reduction.
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double squared_l2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

std::size_t count_mismatch(const double* a, const double* b, std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d neq = _mm256_cmp_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), _CMP_NEQ_UQ);
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(neq)));
  }
  for (; i < n; ++i) {
    count += a[i] != b[i] ? 1 : 0;
  }
  return count;
}

SupportOverlap support_overlap(const double* a, const double* b, std::size_t n) {
  SupportOverlap out;
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int in_a = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_GT_OQ));
    const int in_b = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(b + i), zero, _CMP_GT_OQ));
    out.intersection += static_cast<std::size_t>(__builtin_popcount(in_a & in_b));
    out.union_size += static_cast<std::size_t>(__builtin_popcount(in_a | in_b));
  }
  for (; i < n; ++i) {
    const bool in_a = a[i] > 0.0;
    const bool in_b = b[i] > 0.0;
    out.intersection += (in_a && in_b) ? 1 : 0;
    out.union_size += (in_a || in_b) ? 1 : 0;
  }
  return out;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", squared_l2, dot, count_mismatch, support_overlap};
  return table;
}

}  // namespace escale::simd
