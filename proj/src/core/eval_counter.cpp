// SPDX-License-Identifier: Apache-2.0
#include "escale/core/eval_counter.hpp"

namespace escale {

EvalSnapshot EvalCounter::snapshot() const {
  return EvalSnapshot{coarse_evals(), fine_evals(), build_evals(), oracle_evals()};
}

void EvalCounter::reset() {
  for (auto& bucket : buckets_) bucket.store(0, std::memory_order_relaxed);
}

}  // namespace escale
