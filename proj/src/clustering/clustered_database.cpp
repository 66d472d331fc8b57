// SPDX-License-Identifier: Apache-2.0
#include "escale/clustering/clustered_database.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "escale/core/parallel.hpp"
#include "escale/core/rng.hpp"

namespace escale {
namespace {

std::uint64_t next_instance_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

struct Nearest {
  std::size_t cluster = 0;
  double distance = std::numeric_limits<double>::infinity();
};

}  // namespace

ClusteredDatabase::ClusteredDatabase(std::size_t dimension, DistanceDescriptor distance,
                                     double r_c, std::uint64_t permutation_seed)
    : dimension_(dimension),
      distance_(distance),
      r_c_(r_c),
      seed_(permutation_seed),
      instance_id_(next_instance_id()) {
  if (!(r_c >= 0.0)) throw std::invalid_argument("cluster radius r_c must be non-negative");
}

ClusteredDatabase ClusteredDatabase::build(const Dataset& dataset, double r_c, std::uint64_t seed,
                                           EvalCounter* counter, std::size_t threads) {
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  return build_in_order(dataset, r_c, order, seed, counter, threads);
}

ClusteredDatabase ClusteredDatabase::build_in_order(const Dataset& dataset, double r_c,
                                                    std::span<const std::size_t> order,
                                                    std::uint64_t seed_label,
                                                    EvalCounter* counter, std::size_t threads) {
  ClusteredDatabase db(dataset.dimension(), dataset.distance(), r_c, seed_label);
  const std::size_t n = dataset.size();
  const std::size_t dim = dataset.dimension();
  if (order.size() != n) {
    throw std::invalid_argument("visiting order must be a permutation of the dataset");
  }
  const DistanceFunction& dist = db.distance_;

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = dist.norm_term(dataset.coords(i));

  // Pass 1: center selection.
  std::vector<std::size_t> centers;  // dataset indices
  std::uint64_t evals = 0;
  std::vector<char> seen(n, 0);
  for (const std::size_t i : order) {
    if (i >= n || seen[i]) {
      throw std::invalid_argument("visiting order must be a permutation of the dataset");
    }
    seen[i] = 1;
    const double* p = dataset.coords(i).data();
    bool covered = false;
    for (const std::size_t c : centers) {
      ++evals;
      if (dist.with_norms(p, norms[i], dataset.coords(c).data(), norms[c], dim) <= r_c) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(i);
  }

  // Pass 2: nearest-center assignment against the frozen center list.
  std::vector<Nearest> assignment(n);
  const std::size_t k = centers.size();
  parallel_for(n, resolve_threads(threads), [&](std::size_t i) {
    const double* p = dataset.coords(i).data();
    Nearest best;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t ci = centers[c];
      const double d = dist.with_norms(p, norms[i], dataset.coords(ci).data(), norms[ci], dim);
      if (d < best.distance ||
          (d == best.distance && dataset.id(ci) < dataset.id(centers[best.cluster]))) {
        best = Nearest{c, d};
      }
    }
    assignment[i] = best;
  });
  evals += static_cast<std::uint64_t>(k) * n;
  charge(counter, EvalPhase::build, evals);

  for (const std::size_t c : centers) db.append_cluster(dataset.id(c), dataset.coords(c), norms[c]);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = assignment[i].cluster;
    if (centers[c] == i) continue;
    db.append_member(c, dataset.id(i), dataset.coords(i), norms[i], assignment[i].distance);
  }
  return db;
}

ClusteredDatabase ClusteredDatabase::from_parts(std::size_t dimension,
                                                DistanceDescriptor distance, double r_c,
                                                std::uint64_t permutation_seed,
                                                std::vector<ClusterParts> parts) {
  ClusteredDatabase db(dimension, distance, r_c, permutation_seed);
  const DistanceFunction& dist = db.distance_;
  for (auto& part : parts) {
    if (part.member_ids.empty() || part.coords.size() != part.member_ids.size() * dimension) {
      throw std::invalid_argument("cluster parts have inconsistent sizes");
    }
    Cluster c;
    c.center_id = part.member_ids.front();
    c.member_ids = std::move(part.member_ids);
    c.coords = std::move(part.coords);
    c.norms.resize(c.size());
    c.center_distances.resize(c.size());
    for (std::size_t m = 0; m < c.size(); ++m) c.norms[m] = dist.norm_term(c.member_coords(m, dimension));
    const double* center = c.coords.data();
    for (std::size_t m = 0; m < c.size(); ++m) {
      c.center_distances[m] =
          dist.with_norms(center, c.norms[0], c.coords.data() + m * dimension, c.norms[m], dimension);
    }
    db.recompute_radius(c);
    db.center_coords_.insert(db.center_coords_.end(), c.coords.begin(), c.coords.begin() + dimension);
    db.center_norms_.push_back(c.norms[0]);
    db.clusters_.push_back(std::move(c));
  }
  db.rebuild_locations();
  return db;
}

void ClusteredDatabase::append_cluster(PointId id, std::span<const double> coords, double norm) {
  Cluster c;
  c.center_id = id;
  c.member_ids.push_back(id);
  c.coords.assign(coords.begin(), coords.end());
  c.norms.push_back(norm);
  c.center_distances.push_back(0.0);
  center_coords_.insert(center_coords_.end(), coords.begin(), coords.end());
  center_norms_.push_back(norm);
  cluster_pos_[id] = clusters_.size();
  locations_[id] = Location{id, 0};
  clusters_.push_back(std::move(c));
}

void ClusteredDatabase::append_member(std::size_t cluster, PointId id,
                                      std::span<const double> coords, double norm,
                                      double center_distance) {
  Cluster& c = clusters_[cluster];
  locations_[id] = Location{c.center_id, c.size()};
  c.member_ids.push_back(id);
  c.coords.insert(c.coords.end(), coords.begin(), coords.end());
  c.norms.push_back(norm);
  c.center_distances.push_back(center_distance);
  c.observed_radius = std::max(c.observed_radius, center_distance);
}

void ClusteredDatabase::recompute_radius(Cluster& c) {
  c.observed_radius = 0.0;
  for (const double d : c.center_distances) c.observed_radius = std::max(c.observed_radius, d);
}

void ClusteredDatabase::rebuild_locations() {
  locations_.clear();
  cluster_pos_.clear();
  for (std::size_t ci = 0; ci < clusters_.size(); ++ci) {
    const Cluster& c = clusters_[ci];
    cluster_pos_.emplace(c.center_id, ci);
    for (std::size_t m = 0; m < c.size(); ++m) {
      locations_.emplace(c.member_ids[m], Location{c.center_id, m});
    }
  }
}

std::size_t ClusteredDatabase::cluster_of(PointId id) const {
  const auto it = locations_.find(id);
  if (it == locations_.end()) throw std::out_of_range("unknown point id " + std::to_string(id));
  return cluster_pos_.at(it->second.center_id);
}

bool ClusteredDatabase::is_center(PointId id) const {
  const auto it = locations_.find(id);
  return it != locations_.end() && it->second.slot == 0;
}

InsertOutcome ClusteredDatabase::insert(const Point& p, EvalCounter* counter) {
  if (p.coords.size() != dimension_) {
    throw std::invalid_argument("point has " + std::to_string(p.coords.size()) +
                                " coordinates, index dimension is " + std::to_string(dimension_));
  }
  if (locations_.contains(p.id)) {
    throw std::invalid_argument("duplicate point id " + std::to_string(p.id));
  }
  const double norm = distance_.norm_term(p.coords);
  if (distance().kind() == DistanceKind::cosine && norm == 0.0) {
    throw std::invalid_argument("cosine distance is undefined for an all-zero vector");
  }

  InsertOutcome out;
  Nearest best;
  const std::size_t k_before = clusters_.size();
  for (std::size_t c = 0; c < k_before; ++c) {
    const double d = distance_.with_norms(p.coords.data(), norm, center_coords_.data() + c * dimension_,
                                          center_norms_[c], dimension_);
    if (d < best.distance ||
        (d == best.distance && clusters_[c].center_id < clusters_[best.cluster].center_id)) {
      best = Nearest{c, d};
    }
  }
  out.evaluations = k_before;
  charge(counter, EvalPhase::build, k_before);

  if (k_before > 0 && best.distance <= r_c_) {
    append_member(best.cluster, p.id, p.coords, norm, best.distance);
    out.cluster = best.cluster;
  } else {
    append_cluster(p.id, p.coords, norm);
    out.cluster = clusters_.size() - 1;
    out.new_center = true;
  }
  ++revision_;
  return out;
}

RemoveOutcome ClusteredDatabase::remove(PointId id, EvalCounter* counter) {
  const auto it = locations_.find(id);
  if (it == locations_.end()) throw std::out_of_range("unknown point id " + std::to_string(id));
  const Location loc = it->second;
  const std::size_t ci = cluster_pos_.at(loc.center_id);
  RemoveOutcome out;

  if (loc.slot != 0) {
    // Swap-remove inside the cluster; the center stays at slot 0.
    Cluster& c = clusters_[ci];
    const std::size_t last = c.size() - 1;
    if (loc.slot != last) {
      const PointId moved = c.member_ids[last];
      c.member_ids[loc.slot] = moved;
      std::copy_n(c.coords.begin() + static_cast<std::ptrdiff_t>(last * dimension_), dimension_,
                  c.coords.begin() + static_cast<std::ptrdiff_t>(loc.slot * dimension_));
      c.norms[loc.slot] = c.norms[last];
      c.center_distances[loc.slot] = c.center_distances[last];
      locations_[moved].slot = loc.slot;
    }
    c.member_ids.pop_back();
    c.coords.resize(last * dimension_);
    c.norms.pop_back();
    c.center_distances.pop_back();
    recompute_radius(c);
    locations_.erase(it);
    ++revision_;
    return out;
  }

  out.was_center = true;
  Cluster removed = std::move(clusters_[ci]);
  clusters_.erase(clusters_.begin() + static_cast<std::ptrdiff_t>(ci));
  center_coords_.erase(center_coords_.begin() + static_cast<std::ptrdiff_t>(ci * dimension_),
                       center_coords_.begin() + static_cast<std::ptrdiff_t>((ci + 1) * dimension_));
  center_norms_.erase(center_norms_.begin() + static_cast<std::ptrdiff_t>(ci));
  cluster_pos_.erase(removed.center_id);
  for (std::size_t j = ci; j < clusters_.size(); ++j) cluster_pos_[clusters_[j].center_id] = j;
  for (const PointId m : removed.member_ids) locations_.erase(m);
  ++revision_;

  std::vector<std::size_t> slots(removed.size() - 1);
  std::iota(slots.begin(), slots.end(), std::size_t{1});
  std::sort(slots.begin(), slots.end(), [&](std::size_t a, std::size_t b) {
    return removed.member_ids[a] < removed.member_ids[b];
  });
  for (const std::size_t s : slots) {
    const auto coords = removed.member_coords(s, dimension_);
    const InsertOutcome r =
        insert(Point{removed.member_ids[s], std::vector<double>(coords.begin(), coords.end())}, counter);
    out.evaluations += r.evaluations;
    ++out.reinserted;
  }
  return out;
}

Dataset ClusteredDatabase::to_dataset() const {
  Dataset out(dimension_, distance());
  for (const Cluster& c : clusters_) {
    for (std::size_t m = 0; m < c.size(); ++m) out.add(c.member_ids[m], c.member_coords(m, dimension_));
  }
  return out;
}

}  // namespace escale
