// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "escale/core/distance.hpp"
#include "escale/core/eval_counter.hpp"

namespace escale {

using PointId = std::uint64_t;

// Owning point, used for inserts and query inputs.
struct Point {
  PointId id = 0;
  std::vector<double> coords;
};

// Non-owning view into a Dataset or cluster block.
struct PointRef {
  PointId id = 0;
  std::span<const double> coords;
};

// What values coordinates may take. Frequency vectors are fragment counts
// and must be non-negative.
enum class CoordDomain : std::uint8_t { real, frequency };

// Ordered points of one fixed dimension in one distance space, stored
// row-major in a single buffer.
//
// Dimension 0 is only legal while the dataset is empty; it marks a dataset
// whose dimension was never declared (e.g. parsed from an empty file).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t dimension, DistanceDescriptor distance,
          CoordDomain domain = CoordDomain::real);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const DistanceDescriptor& distance() const { return distance_; }
  CoordDomain domain() const { return domain_; }

  // Throws std::invalid_argument on wrong arity, duplicate id, a negative
  // coordinate in a frequency dataset, or a zero vector under cosine.
  void add(PointId id, std::span<const double> coords);
  void add(const Point& p) { add(p.id, p.coords); }

  PointId id(std::size_t index) const { return ids_[index]; }
  std::span<const double> coords(std::size_t index) const {
    return {coords_.data() + index * dimension_, dimension_};
  }
  PointRef operator[](std::size_t index) const { return {ids_[index], coords(index)}; }
  Point point(std::size_t index) const;

  std::optional<std::size_t> index_of(PointId id) const;
  bool contains(PointId id) const { return index_of(id).has_value(); }

  // Smallest id not in use (max + 1, or 0 when empty).
  PointId next_id() const { return next_id_; }

  std::span<const double> raw_coords() const { return coords_; }
  std::span<const PointId> ids() const { return ids_; }

  // Validates arity and the domain constraints without inserting.
  void check_point(std::span<const double> coords) const;

 private:
  std::size_t dimension_ = 0;
  DistanceDescriptor distance_;
  CoordDomain domain_ = CoordDomain::real;
  std::vector<PointId> ids_;
  std::vector<double> coords_;
  std::unordered_map<PointId, std::size_t> index_;
  PointId next_id_ = 0;
};

// Brute-force radius query: every point p with d(q, p) <= r, in dataset
// order. Costs exactly size() evaluations, charged to the oracle phase.
std::vector<PointId> ball(const Dataset& dataset, std::span<const double> q, double r,
                          EvalCounter* counter = nullptr);

// All n distances from q, in dataset order (oracle phase).
std::vector<double> distances_from(const Dataset& dataset, std::span<const double> q,
                                   EvalCounter* counter = nullptr);

}  // namespace escale
