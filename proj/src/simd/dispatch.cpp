// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_internal.hpp"

namespace escale::simd {

const KernelTable* avx2_kernels() {
#if defined(ESCALE_BUILD_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(ESCALE_BUILD_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &neon_table();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select_kernels() {
  const char* forced = std::getenv("ESCALE_SIMD");
  if (forced != nullptr && *forced != '\0') {
    const std::string want(forced);
    const KernelTable* table = nullptr;
    if (want == "scalar") {
      table = &scalar_kernels();
    } else if (want == "avx2") {
      table = avx2_kernels();
    } else if (want == "neon") {
      table = neon_kernels();
    }
    if (table == nullptr) {
      throw std::runtime_error("ESCALE_SIMD=" + want + " is not available on this build/CPU");
    }
    return *table;
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  if (const KernelTable* t = neon_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace escale::simd
