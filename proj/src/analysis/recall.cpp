// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "escale/analysis/diagnostics.hpp"
#include "escale/core/parallel.hpp"

namespace escale {

QueryRecall compare_to_oracle(const QueryResult& result, std::span<const PointId> oracle) {
  std::vector<PointId> expected(oracle.begin(), oracle.end());
  std::vector<PointId> got;
  got.reserve(result.hits.size());
  for (const Hit& h : result.hits) got.push_back(h.id);
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  std::vector<PointId> common;
  std::set_intersection(expected.begin(), expected.end(), got.begin(), got.end(),
                        std::back_inserter(common));

  QueryRecall out;
  out.oracle_size = expected.size();
  out.hit_count = got.size();
  out.stats = result.stats;
  if (!expected.empty()) {
    out.recall = static_cast<double>(common.size()) / static_cast<double>(expected.size());
  }
  if (!got.empty()) {
    out.precision = static_cast<double>(common.size()) / static_cast<double>(got.size());
  }
  return out;
}

RecallReport recall_vs_oracle(const ClusteredDatabase& db, std::span<const RadiusQuery> queries,
                              const SearchOptions& options, std::size_t threads) {
  const Dataset dataset = db.to_dataset();
  RecallReport report;
  report.queries.resize(queries.size());
  parallel_for(queries.size(), resolve_threads(threads), [&](std::size_t i) {
    const QueryResult result = search(db, queries[i].coords, queries[i].r, options);
    const std::vector<PointId> oracle = ball(dataset, queries[i].coords, queries[i].r);
    report.queries[i] = compare_to_oracle(result, oracle);
  });

  double recall_sum = 0.0;
  double precision_sum = 0.0;
  for (const QueryRecall& q : report.queries) {
    recall_sum += q.recall;
    precision_sum += q.precision;
    report.naive_evals += dataset.size();
    report.accelerated_evals += q.stats.coarse_evals + q.stats.fine_evals;
  }
  if (!report.queries.empty()) {
    report.mean_recall = recall_sum / static_cast<double>(report.queries.size());
    report.mean_precision = precision_sum / static_cast<double>(report.queries.size());
  }
  if (report.accelerated_evals > 0) {
    report.comparison_ratio =
        static_cast<double>(report.naive_evals) / static_cast<double>(report.accelerated_evals);
  }
  return report;
}

}  // namespace escale
