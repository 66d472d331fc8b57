// SPDX-License-Identifier: Apache-2.0
#include "escale/search/search.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "escale/core/parallel.hpp"

namespace escale {

void sort_hits(std::vector<Hit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  });
}

namespace detail {

void check_query(std::span<const double> q, std::size_t dim, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("search radius must be non-negative");
  if (q.size() != dim) {
    throw std::invalid_argument("query dimension " + std::to_string(q.size()) +
                                " does not match index dimension " + std::to_string(dim));
  }
}

std::vector<std::size_t> scan_centers(const DistanceFunction& dist, std::span<const double> centers,
                                      std::span<const double> center_norms, std::size_t dim,
                                      std::span<const double> q, double q_norm, double threshold) {
  std::vector<std::size_t> out;
  const std::size_t k = center_norms.size();
  for (std::size_t c = 0; c < k; ++c) {
    if (dist.with_norms(q.data(), q_norm, centers.data() + c * dim, center_norms[c], dim) <= threshold) {
      out.push_back(c);
    }
  }
  return out;
}

void scan_block(const DistanceFunction& dist, std::span<const PointId> ids,
                std::span<const double> coords, std::span<const double> norms, std::size_t dim,
                std::span<const double> q, double q_norm, double r, std::vector<Hit>& out) {
  for (std::size_t m = 0; m < ids.size(); ++m) {
    const double d = dist.with_norms(q.data(), q_norm, coords.data() + m * dim, norms[m], dim);
    if (d <= r) out.push_back(Hit{ids[m], d});
  }
}

}  // namespace detail

CandidateSet coarse_search(const ClusteredDatabase& db, std::span<const double> q, double r,
                           const SearchOptions& options, EvalCounter* counter) {
  detail::check_query(q, db.dimension(), r);
  const DistanceFunction& dist = db.distance_function();
  CandidateSet cand;
  cand.db_instance = db.instance_id();
  cand.db_revision = db.revision();
  const double threshold = (r + db.r_c()) * options.coarse_radius_scale;
  cand.cluster_ids = detail::scan_centers(dist, db.center_coords(), db.center_norms(),
                                          db.dimension(), q, dist.norm_term(q), threshold);
  for (const std::size_t c : cand.cluster_ids) cand.total_members += db.cluster(c).size();
  cand.coarse_evals = db.k();
  charge(counter, EvalPhase::coarse, cand.coarse_evals);
  return cand;
}

QueryResult fine_search(const ClusteredDatabase& db, const CandidateSet& candidates,
                        std::span<const double> q, double r, const SearchOptions& options,
                        EvalCounter* counter) {
  if (candidates.db_instance != db.instance_id() || candidates.db_revision != db.revision()) {
    throw std::logic_error("candidate set is stale: it was computed against a different index state");
  }
  detail::check_query(q, db.dimension(), r);
  const DistanceFunction& dist = db.distance_function();
  const double q_norm = dist.norm_term(q);
  QueryResult result;
  for (const std::size_t ci : candidates.cluster_ids) {
    const Cluster& c = db.cluster(ci);
    detail::scan_block(dist, c.member_ids, c.coords, c.norms, db.dimension(), q, q_norm, r,
                       result.hits);
    result.stats.fine_evals += c.size();
  }
  charge(counter, EvalPhase::fine, result.stats.fine_evals);
  result.stats.coarse_evals = candidates.coarse_evals;
  result.stats.clusters_scanned = candidates.cluster_ids.size();
  result.stats.candidate_fraction =
      db.size() == 0 ? 0.0 : static_cast<double>(result.stats.fine_evals) / static_cast<double>(db.size());
  if (options.sort_hits) sort_hits(result.hits);
  return result;
}

QueryResult search(const ClusteredDatabase& db, std::span<const double> q, double r,
                   const SearchOptions& options, EvalCounter* counter) {
  const CandidateSet cand = coarse_search(db, q, r, options, counter);
  return fine_search(db, cand, q, r, options, counter);
}

std::vector<QueryResult> search_batch(const ClusteredDatabase& db,
                                      std::span<const RadiusQuery> queries,
                                      const SearchOptions& options, EvalCounter* counter,
                                      std::size_t threads) {
  std::vector<QueryResult> out(queries.size());
  parallel_for(queries.size(), resolve_threads(threads), [&](std::size_t i) {
    out[i] = search(db, queries[i].coords, queries[i].r, options, counter);
  });
  return out;
}

}  // namespace escale
