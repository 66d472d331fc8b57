// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "escale/clustering/clustered_database.hpp"
#include "escale/core/dataset.hpp"
#include "escale/search/search.hpp"

namespace escale {

// n / k, the expected acceleration of the clustered scan over brute force.
// Throws std::invalid_argument on an empty index.
double predicted_speedup(const ClusteredDatabase& db);

// Expected cost of one query: k + output_size * ((r + 2 r_c) / r)^d.
// Throws std::invalid_argument unless r > 0, r_c >= 0 and d >= 0.
double predicted_candidate_bound(std::size_t output_size, double r, double r_c, double d,
                                 std::size_t k);

struct TripleSampling {
  enum class Mode : std::uint8_t { automatic, exhaustive, sampled };
  Mode mode = Mode::automatic;
  std::size_t count = 100'000;  // used by `sampled`, and by `automatic` above the cutoff

  static constexpr std::size_t exhaustive_cutoff = 60;

  static TripleSampling exhaustive() { return {Mode::exhaustive, 0}; }
  static TripleSampling sampled(std::size_t n) { return {Mode::sampled, n}; }
};

struct TriangleViolationReport {
  std::uint64_t triples_sampled = 0;
  std::uint64_t violations = 0;
  double alpha = 0.0;
  bool exhaustive = false;
};

// Fraction of ordered triples (x, y, z) of distinct points with
// d(x,z) > d(x,y) + d(y,z), where excesses under 8 ulps of the right-hand
// side count as rounding, not violations. Automatic mode enumerates every triple when
// n <= 60 and otherwise draws `count` seeded triples. Throws
// std::invalid_argument when n < 3.
TriangleViolationReport triangle_violation_rate(const Dataset& dataset, TripleSampling sampling,
                                                std::uint64_t seed);

struct DensityUniformityReport {
  double radius = 0.0;
  std::size_t samples = 0;
  std::size_t zero_count_samples = 0;  // excluded from the statistics below
  double min_count = 0.0;
  double max_count = 0.0;
  double mean_count = 0.0;
  double gamma_hat = 1.0;  // max(max/mean, mean/min)
};

// Ball populations (anchor excluded) around seeded sample points.
DensityUniformityReport density_uniformity(const Dataset& dataset, double radius,
                                           std::size_t samples, std::uint64_t seed);

struct QueryRecall {
  double recall = 1.0;     // |hits ∩ oracle| / |oracle|, 1 when the oracle is empty
  double precision = 1.0;  // |hits ∩ oracle| / |hits|, 1 when there are no hits
  std::size_t oracle_size = 0;
  std::size_t hit_count = 0;
  SearchStats stats;
};

struct RecallReport {
  std::vector<QueryRecall> queries;
  double mean_recall = 1.0;
  double mean_precision = 1.0;
  std::uint64_t naive_evals = 0;        // n per query
  std::uint64_t accelerated_evals = 0;  // coarse + fine
  double comparison_ratio = 1.0;        // naive / accelerated
};

// Runs every query through search() and through brute force on the same
// points, comparing hit sets by id.
RecallReport recall_vs_oracle(const ClusteredDatabase& db, std::span<const RadiusQuery> queries,
                              const SearchOptions& options = {}, std::size_t threads = 1);

// Compares one result against an oracle id list.
QueryRecall compare_to_oracle(const QueryResult& result, std::span<const PointId> oracle);

}  // namespace escale
