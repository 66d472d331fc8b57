// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "escale/simd/kernels.hpp"

namespace escale::simd {

#if defined(ESCALE_BUILD_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(ESCALE_BUILD_NEON)
const KernelTable& neon_table();
#endif

}  // namespace escale::simd
