// SPDX-License-Identifier: Apache-2.0
#include "escale/core/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace escale {

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::euclidean: return "euclidean";
    case DistanceKind::cosine: return "cosine";
    case DistanceKind::hamming: return "hamming";
    case DistanceKind::jaccard: return "jaccard";
  }
  return "unknown";
}

DistanceKind parse_distance_kind(std::string_view name) {
  if (name == "euclidean") return DistanceKind::euclidean;
  if (name == "cosine") return DistanceKind::cosine;
  if (name == "hamming") return DistanceKind::hamming;
  if (name == "jaccard") return DistanceKind::jaccard;
  throw std::invalid_argument("unknown distance kind '" + std::string(name) + "'");
}

namespace {

[[noreturn]] void zero_vector_error() {
  throw std::invalid_argument("cosine distance is undefined for an all-zero vector");
}

}  // namespace

double DistanceFunction::norm_term(std::span<const double> a) const {
  if (desc_.kind() != DistanceKind::cosine) return 0.0;
  return kernels_->dot(a.data(), a.data(), a.size());
}

double DistanceFunction::with_norms(const double* a, double a_norm, const double* b,
                                    double b_norm, std::size_t dim) const {
  switch (desc_.kind()) {
    case DistanceKind::euclidean:
      return std::sqrt(kernels_->squared_l2(a, b, dim));
    case DistanceKind::cosine: {
      if (a_norm == 0.0 || b_norm == 0.0) zero_vector_error();
      // sqrt(x*x) == x in IEEE arithmetic, so d(a,a) is exactly 0.
      const double sim = kernels_->dot(a, b, dim) / std::sqrt(a_norm * b_norm);
      return std::clamp(1.0 - sim, 0.0, 2.0);
    }
    case DistanceKind::hamming:
      return static_cast<double>(kernels_->count_mismatch(a, b, dim));
    case DistanceKind::jaccard: {
      const simd::SupportOverlap o = kernels_->support_overlap(a, b, dim);
      if (o.union_size == 0) return 0.0;
      // One rounding of the exact ratio (u - i) / u.
      return static_cast<double>(o.union_size - o.intersection) / static_cast<double>(o.union_size);
    }
  }
  return 0.0;
}

double DistanceFunction::operator()(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  return with_norms(a.data(), norm_term(a), b.data(), norm_term(b), a.size());
}

double distance(const DistanceDescriptor& desc, std::span<const double> a,
                std::span<const double> b, EvalCounter* counter, EvalPhase phase) {
  const double d = DistanceFunction(desc)(a, b);
  charge(counter, phase);
  return d;
}

}  // namespace escale
