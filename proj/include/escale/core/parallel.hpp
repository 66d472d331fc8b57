// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace escale {

// Worker count: `requested` if non-zero, else ESCALE_THREADS, else the
// hardware concurrency (at least 1).
std::size_t resolve_threads(std::size_t requested = 0);

// Runs body(i) for i in [0, count) on up to `threads` workers. Indices are
// handed out dynamically; body must only write to per-index state. The
// first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace escale
