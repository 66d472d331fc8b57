// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace escale::simd {

// Result of comparing the supports (indices with coord > 0) of two vectors.
struct SupportOverlap {
  std::size_t intersection = 0;
  std::size_t union_size = 0;
};

// One implementation of every inner loop the distance functions need.
// All variants must agree exactly on the integer kernels and to within
// summation-order rounding on the floating-point ones.
struct KernelTable {
  std::string_view name;
  double (*squared_l2)(const double* a, const double* b, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  std::size_t (*count_mismatch)(const double* a, const double* b, std::size_t n);
  SupportOverlap (*support_overlap)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// The table every distance evaluation goes through. Picked once, on first
// use: the best variant the CPU supports, unless ESCALE_SIMD is set to
// "scalar", "avx2" or "neon".
const KernelTable& active_kernels();

}  // namespace escale::simd
