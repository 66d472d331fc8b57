// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "escale/core/eval_counter.hpp"
#include "escale/simd/kernels.hpp"

namespace escale {

enum class DistanceKind : std::uint8_t { euclidean = 0, cosine = 1, hamming = 2, jaccard = 3 };

std::string_view to_string(DistanceKind kind);
// Throws std::invalid_argument on an unknown name.
DistanceKind parse_distance_kind(std::string_view name);

class DistanceDescriptor {
 public:
  constexpr DistanceDescriptor() = default;
  constexpr explicit DistanceDescriptor(DistanceKind kind) : kind_(kind) {}

  constexpr DistanceKind kind() const { return kind_; }
  // Cosine distance (1 - cosine similarity) breaks the triangle inequality.
  constexpr bool is_metric() const { return kind_ != DistanceKind::cosine; }
  std::string_view name() const { return to_string(kind_); }

  friend constexpr bool operator==(DistanceDescriptor, DistanceDescriptor) = default;

 private:
  DistanceKind kind_ = DistanceKind::euclidean;
};

// Evaluates one distance kind through the active SIMD kernel table.
//
// Cosine needs |a|^2 and |b|^2; callers that scan the same vectors many
// times cache them via norm_term() and call with_norms(). Both paths run
// the same arithmetic, so cached and uncached results are bit-identical.
class DistanceFunction {
 public:
  explicit DistanceFunction(DistanceDescriptor desc,
                            const simd::KernelTable& kernels = simd::active_kernels())
      : desc_(desc), kernels_(&kernels) {}

  const DistanceDescriptor& descriptor() const { return desc_; }
  const simd::KernelTable& kernels() const { return *kernels_; }

  // Throws std::invalid_argument on a dimension mismatch or, for cosine,
  // on an all-zero vector.
  double operator()(std::span<const double> a, std::span<const double> b) const;

  // Cached per-vector term: the squared norm for cosine, 0 otherwise.
  double norm_term(std::span<const double> a) const;

  // Skips the dimension check; callers guarantee equal lengths.
  double with_norms(const double* a, double a_norm, const double* b, double b_norm,
                    std::size_t dim) const;

 private:
  DistanceDescriptor desc_;
  const simd::KernelTable* kernels_;
};

// Single counted evaluation.
double distance(const DistanceDescriptor& desc, std::span<const double> a,
                std::span<const double> b, EvalCounter* counter = nullptr,
                EvalPhase phase = EvalPhase::oracle);

}  // namespace escale
