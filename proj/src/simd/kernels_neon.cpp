// SPDX-License-Identifier: Apache-2.0
#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace escale::simd {
namespace {

double squared_l2(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vaddq_f64(acc0, vmulq_f64(d0, d0));
    acc1 = vaddq_f64(acc1, vmulq_f64(d1, d1));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc1 = vaddq_f64(acc1, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

std::size_t count_mismatch(const double* a, const double* b, std::size_t n) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // vceqq lanes are all-ones on equality; count the equal lanes.
    const uint64x2_t eq = vceqq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    count += 2 - static_cast<std::size_t>((vgetq_lane_u64(eq, 0) & 1) + (vgetq_lane_u64(eq, 1) & 1));
  }
  for (; i < n; ++i) {
    count += a[i] != b[i] ? 1 : 0;
  }
  return count;
}

SupportOverlap support_overlap(const double* a, const double* b, std::size_t n) {
  SupportOverlap out;
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t in_a = vcgtq_f64(vld1q_f64(a + i), zero);
    const uint64x2_t in_b = vcgtq_f64(vld1q_f64(b + i), zero);
    const uint64x2_t both = vandq_u64(in_a, in_b);
    const uint64x2_t either = vorrq_u64(in_a, in_b);
    out.intersection += (vgetq_lane_u64(both, 0) & 1) + (vgetq_lane_u64(both, 1) & 1);
    out.union_size += (vgetq_lane_u64(either, 0) & 1) + (vgetq_lane_u64(either, 1) & 1);
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

const KernelTable& neon_table() {
  static const KernelTable table{"neon", squared_l2, dot, count_mismatch, support_overlap};
  return table;
}

}  // namespace escale::simd
