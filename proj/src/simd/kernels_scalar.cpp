// SPDX-License-Identifier: Apache-2.0
#include "escale/simd/kernels.hpp"

namespace escale::simd {
namespace {

double squared_l2(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

std::size_t count_mismatch(const double* a, const double* b, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    count += a[i] != b[i] ? 1 : 0;
  }
  return count;
}

SupportOverlap support_overlap(const double* a, const double* b, std::size_t n) {
  SupportOverlap out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_a = a[i] > 0.0;
    const bool in_b = b[i] > 0.0;
    out.intersection += (in_a && in_b) ? 1 : 0;
    out.union_size += (in_a || in_b) ? 1 : 0;
  }
  return out;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", squared_l2, dot, count_mismatch, support_overlap};
  return table;
}

}  // namespace escale::simd
