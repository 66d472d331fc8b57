// SPDX-License-Identifier: Apache-2.0
#include "escale/core/dataset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace escale {

Dataset::Dataset(std::size_t dimension, DistanceDescriptor distance, CoordDomain domain)
    : dimension_(dimension), distance_(distance), domain_(domain) {}

void Dataset::check_point(std::span<const double> coords) const {
  if (coords.size() != dimension_) {
    throw std::invalid_argument("point has " + std::to_string(coords.size()) +
                                " coordinates, dataset dimension is " +
                                std::to_string(dimension_));
  }
  if (dimension_ == 0) {
    throw std::invalid_argument("cannot add points to a dataset of dimension 0");
  }
  if (domain_ == CoordDomain::frequency &&
      std::any_of(coords.begin(), coords.end(), [](double v) { return !(v >= 0.0); })) {
    throw std::invalid_argument("frequency vectors must have non-negative coordinates");
  }
  if (distance_.kind() == DistanceKind::cosine &&
      std::all_of(coords.begin(), coords.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("cosine distance is undefined for an all-zero vector");
  }
}

void Dataset::add(PointId id, std::span<const double> coords) {
  check_point(coords);
  if (index_.contains(id)) {
    throw std::invalid_argument("duplicate point id " + std::to_string(id));
  }
  index_.emplace(id, ids_.size());
  ids_.push_back(id);
  coords_.insert(coords_.end(), coords.begin(), coords.end());
  next_id_ = std::max(next_id_, id + 1);
}

Point Dataset::point(std::size_t index) const {
  const auto c = coords(index);
  return Point{ids_[index], std::vector<double>(c.begin(), c.end())};
}

std::optional<std::size_t> Dataset::index_of(PointId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> distances_from(const Dataset& dataset, std::span<const double> q,
                                   EvalCounter* counter) {
  if (!dataset.empty() && q.size() != dataset.dimension()) {
    throw std::invalid_argument("query dimension " + std::to_string(q.size()) +
                                " does not match dataset dimension " +
                                std::to_string(dataset.dimension()));
  }
  const DistanceFunction dist(dataset.distance());
  const double q_norm = dist.norm_term(q);
  std::vector<double> out(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto p = dataset.coords(i);
    out[i] = dist.with_norms(q.data(), q_norm, p.data(), dist.norm_term(p), q.size());
  }
  charge(counter, EvalPhase::oracle, dataset.size());
  return out;
}

std::vector<PointId> ball(const Dataset& dataset, std::span<const double> q, double r,
                          EvalCounter* counter) {
  if (r < 0.0) throw std::invalid_argument("radius must be non-negative");
  const std::vector<double> d = distances_from(dataset, q, counter);
  std::vector<PointId> out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] <= r) out.push_back(dataset.id(i));
  }
  return out;
}

}  // namespace escale
