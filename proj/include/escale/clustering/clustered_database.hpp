// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "escale/core/dataset.hpp"
#include "escale/core/distance.hpp"
#include "escale/core/eval_counter.hpp"

namespace escale {

// One cluster: its center (always member 0) and its members' ids and
// coordinates laid out contiguously for the fine scan.
struct Cluster {
  PointId center_id = 0;
  std::vector<PointId> member_ids;
  std::vector<double> coords;            // member-major, member_ids.size() x dim
  std::vector<double> norms;             // DistanceFunction::norm_term per member
  std::vector<double> center_distances;  // d(center, member), computed at assignment
  double observed_radius = 0.0;

  std::size_t size() const { return member_ids.size(); }
  std::span<const double> member_coords(std::size_t i, std::size_t dim) const {
    return {coords.data() + i * dim, dim};
  }
};

// Member list of one cluster, as handed to from_parts(). Member 0 must be
// the center.
struct ClusterParts {
  std::vector<PointId> member_ids;
  std::vector<double> coords;
};

struct InsertOutcome {
  std::size_t cluster = 0;   // index of the cluster the point joined
  bool new_center = false;
  std::uint64_t evaluations = 0;
};

struct RemoveOutcome {
  bool was_center = false;
  std::size_t reinserted = 0;
  std::uint64_t evaluations = 0;
};

// The clustered index: k cluster centers with pairwise separation
// > r_c, every point assigned to a center within r_c.
//
// Cluster ids are positions in clusters(); they follow center selection
// order and shift down when a cluster is removed.
class ClusteredDatabase {
 public:
  ClusteredDatabase(std::size_t dimension, DistanceDescriptor distance, double r_c,
                    std::uint64_t permutation_seed);

  // Randomized greedy two-pass construction. Pass 1 walks a seeded random
  // permutation and opens a center whenever the point is farther than r_c
  // from every existing center; pass 2 assigns every point to its nearest
  // center (ties go to the lowest center id). Pass 2 runs on `threads`
  // workers (0 = resolve_threads()).
  static ClusteredDatabase build(const Dataset& dataset, double r_c, std::uint64_t seed,
                                 EvalCounter* counter = nullptr, std::size_t threads = 1);

  // Same, over an explicit visiting order (a permutation of [0, n)).
  static ClusteredDatabase build_in_order(const Dataset& dataset, double r_c,
                                          std::span<const std::size_t> order,
                                          std::uint64_t seed_label = 0,
                                          EvalCounter* counter = nullptr,
                                          std::size_t threads = 1);

  // Reassembles an index from stored clusters without checking any
  // invariant; run validate() on the result. Center distances and radii
  // are recomputed (uncounted).
  static ClusteredDatabase from_parts(std::size_t dimension, DistanceDescriptor distance,
                                      double r_c, std::uint64_t permutation_seed,
                                      std::vector<ClusterParts> clusters);

  // Costs exactly k evaluations (the k before the insert).
  InsertOutcome insert(const Point& p, EvalCounter* counter = nullptr);

  // Non-center: O(1), no evaluations. Center: drops the cluster and
  // re-inserts its other members in ascending id order.
  RemoveOutcome remove(PointId id, EvalCounter* counter = nullptr);

  std::size_t dimension() const { return dimension_; }
  const DistanceDescriptor& distance() const { return distance_.descriptor(); }
  const DistanceFunction& distance_function() const { return distance_; }
  double r_c() const { return r_c_; }
  std::uint64_t permutation_seed() const { return seed_; }

  std::size_t k() const { return clusters_.size(); }
  std::size_t size() const { return locations_.size(); }
  bool empty() const { return clusters_.empty(); }

  std::span<const Cluster> clusters() const { return clusters_; }
  const Cluster& cluster(std::size_t index) const { return clusters_.at(index); }

  // k x dim matrix of center coordinates, in cluster order.
  std::span<const double> center_coords() const { return center_coords_; }
  std::span<const double> center_norms() const { return center_norms_; }

  bool contains(PointId id) const { return locations_.contains(id); }
  // Cluster index holding `id`; throws std::out_of_range if absent.
  std::size_t cluster_of(PointId id) const;
  bool is_center(PointId id) const;

  // Points regrouped by cluster (cluster order, then member order).
  Dataset to_dataset() const;

  // Changes on every successful insert/remove; pairs with instance_id() to
  // detect stale candidate sets.
  std::uint64_t revision() const { return revision_; }
  std::uint64_t instance_id() const { return instance_id_; }

 private:
  struct Location {
    PointId center_id;
    std::size_t slot;
  };

  void append_cluster(PointId id, std::span<const double> coords, double norm);
  void append_member(std::size_t cluster, PointId id, std::span<const double> coords,
                     double norm, double center_distance);
  void recompute_radius(Cluster& c);
  void rebuild_locations();

  std::size_t dimension_;
  DistanceFunction distance_;
  double r_c_;
  std::uint64_t seed_;
  std::vector<Cluster> clusters_;
  std::vector<double> center_coords_;
  std::vector<double> center_norms_;
  std::unordered_map<PointId, Location> locations_;
  std::unordered_map<PointId, std::size_t> cluster_pos_;  // center id -> cluster index
  std::uint64_t instance_id_;
  std::uint64_t revision_ = 0;
};

struct ValidationReport {
  bool partition = true;          // every id in exactly one cluster, center in its cluster
  bool center_separation = true;  // d(c1, c2) > r_c for all center pairs
  bool membership_radius = true;  // d(center, m) <= r_c for all members
  bool observed_radius = true;    // stored radius equals the recomputed maximum
  std::vector<std::string> failures;

  bool ok() const { return partition && center_separation && membership_radius && observed_radius; }
};

// Recomputes every invariant from scratch (uncounted evaluations).
ValidationReport validate(const ClusteredDatabase& db);

// Brute-force check that every point sits in a nearest cluster, ties to
// the lowest center id. Holds after build(), may lapse after inserts.
// Returns the number of misassigned points.
std::size_t count_nearest_center_violations(const ClusteredDatabase& db);

}  // namespace escale
