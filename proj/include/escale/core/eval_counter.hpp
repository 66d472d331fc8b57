// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <atomic>
#include <cstdint>

namespace escale {

// Which part of the pipeline a distance evaluation is charged to.
enum class EvalPhase : std::uint8_t { coarse, fine, build, oracle };

struct EvalSnapshot {
  std::uint64_t coarse = 0;
  std::uint64_t fine = 0;
  std::uint64_t build = 0;
  std::uint64_t oracle = 0;

  std::uint64_t total() const { return coarse + fine + build + oracle; }
  friend bool operator==(const EvalSnapshot&, const EvalSnapshot&) = default;
};

// Counts distance evaluations. Safe for concurrent increments; totals are
// exact once all writers have finished. Hot loops count locally and call
// add() once per batch.
class EvalCounter {
 public:
  EvalCounter() = default;
  EvalCounter(const EvalCounter&) = delete;
  EvalCounter& operator=(const EvalCounter&) = delete;

  void add(EvalPhase phase, std::uint64_t count = 1) {
    buckets_[static_cast<std::size_t>(phase)].fetch_add(count, std::memory_order_relaxed);
  }

  std::uint64_t get(EvalPhase phase) const {
    return buckets_[static_cast<std::size_t>(phase)].load(std::memory_order_relaxed);
  }

  std::uint64_t coarse_evals() const { return get(EvalPhase::coarse); }
  std::uint64_t fine_evals() const { return get(EvalPhase::fine); }
  std::uint64_t build_evals() const { return get(EvalPhase::build); }
  std::uint64_t oracle_evals() const { return get(EvalPhase::oracle); }

  EvalSnapshot snapshot() const;
  void reset();

 private:
  std::array<std::atomic<std::uint64_t>, 4> buckets_{};
};

// Null-safe helper used at every call site that takes an optional counter.
inline void charge(EvalCounter* counter, EvalPhase phase, std::uint64_t count = 1) {
  if (counter != nullptr && count != 0) counter->add(phase, count);
}

}  // namespace escale
