// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "escale/clustering/clustered_database.hpp"
#include "escale/core/dataset.hpp"
#include "escale/core/eval_counter.hpp"

namespace escale {

struct SearchOptions {
  // Coarse threshold is (r + r_c) * coarse_radius_scale. Values above 1
  // widen the candidate set; nothing is promised about what that buys for
  // non-metric distances.
  double coarse_radius_scale = 1.0;
  // Hits come back ordered by (distance, id). Benchmarks turn this off so
  // the timed section matches a plain filtering scan.
  bool sort_hits = true;
};

struct CandidateSet {
  std::vector<std::size_t> cluster_ids;  // ascending
  std::size_t total_members = 0;
  std::uint64_t coarse_evals = 0;
  // Identity of the index this was computed against.
  std::uint64_t db_instance = 0;
  std::uint64_t db_revision = 0;
};

struct Hit {
  PointId id = 0;
  double distance = 0.0;
  friend bool operator==(const Hit&, const Hit&) = default;
};

struct SearchStats {
  std::uint64_t coarse_evals = 0;
  std::uint64_t fine_evals = 0;
  std::size_t clusters_scanned = 0;
  double candidate_fraction = 0.0;  // fine_evals / n
};

struct QueryResult {
  std::vector<Hit> hits;
  SearchStats stats;
};

// Coarse stage: every cluster whose center lies within the coarse
// threshold of q. Exactly k evaluations.
CandidateSet coarse_search(const ClusteredDatabase& db, std::span<const double> q, double r,
                           const SearchOptions& options = {}, EvalCounter* counter = nullptr);

// Fine stage: scans every member of every candidate cluster, keeps those
// with d <= r. Throws std::logic_error if `candidates` came from another
// index or an older revision of this one.
QueryResult fine_search(const ClusteredDatabase& db, const CandidateSet& candidates,
                        std::span<const double> q, double r, const SearchOptions& options = {},
                        EvalCounter* counter = nullptr);

QueryResult search(const ClusteredDatabase& db, std::span<const double> q, double r,
                   const SearchOptions& options = {}, EvalCounter* counter = nullptr);

struct RadiusQuery {
  std::vector<double> coords;
  double r = 0.0;
};

// Fans queries over `threads` workers (0 = resolve_threads()); results are
// in input order.
std::vector<QueryResult> search_batch(const ClusteredDatabase& db,
                                      std::span<const RadiusQuery> queries,
                                      const SearchOptions& options = {},
                                      EvalCounter* counter = nullptr, std::size_t threads = 0);

// Sorts hits by (distance, id).
void sort_hits(std::vector<Hit>& hits);

namespace detail {

// Center indices within `threshold` of q, scanning the k x dim matrix.
std::vector<std::size_t> scan_centers(const DistanceFunction& dist, std::span<const double> centers,
                                      std::span<const double> center_norms, std::size_t dim,
                                      std::span<const double> q, double q_norm, double threshold);

// Appends members of one contiguous block within r of q.
void scan_block(const DistanceFunction& dist, std::span<const PointId> ids,
                std::span<const double> coords, std::span<const double> norms, std::size_t dim,
                std::span<const double> q, double q_norm, double r, std::vector<Hit>& out);

void check_query(std::span<const double> q, std::size_t dim, double r);

}  // namespace detail

}  // namespace escale
