// SPDX-License-Identifier: Apache-2.0
#include <string>
#include <unordered_map>

#include "escale/clustering/clustered_database.hpp"

namespace escale {

ValidationReport validate(const ClusteredDatabase& db) {
  ValidationReport report;
  const std::size_t dim = db.dimension();
  const DistanceFunction& dist = db.distance_function();
  const auto clusters = db.clusters();

  std::unordered_map<PointId, std::size_t> owner;
  std::size_t members = 0;
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const Cluster& c = clusters[ci];
    if (c.member_ids.empty() || c.member_ids.front() != c.center_id) {
      report.partition = false;
      report.failures.push_back("cluster " + std::to_string(ci) + " does not contain its center");
    }
    for (const PointId id : c.member_ids) {
      ++members;
      const auto [it, fresh] = owner.emplace(id, ci);
      if (!fresh) {
        report.partition = false;
        report.failures.push_back("point " + std::to_string(id) + " is in clusters " +
                                  std::to_string(it->second) + " and " + std::to_string(ci));
      }
    }
  }
  if (members != db.size()) {
    report.partition = false;
    report.failures.push_back("cluster members (" + std::to_string(members) +
                              ") do not match indexed points (" + std::to_string(db.size()) + ")");
  }

  const auto centers = db.center_coords();
  const auto norms = db.center_norms();
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      const double d = dist.with_norms(centers.data() + a * dim, norms[a],
                                       centers.data() + b * dim, norms[b], dim);
      if (!(d > db.r_c())) {
        report.center_separation = false;
        report.failures.push_back("centers " + std::to_string(clusters[a].center_id) + " and " +
                                  std::to_string(clusters[b].center_id) + " are " +
                                  std::to_string(d) + " apart");
      }
    }
  }

  for (const Cluster& c : clusters) {
    if (c.member_ids.empty()) continue;
    double radius = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
      const double d = dist.with_norms(c.coords.data(), c.norms[0], c.coords.data() + m * dim,
                                       c.norms[m], dim);
      radius = std::max(radius, d);
      if (!(d <= db.r_c())) {
        report.membership_radius = false;
        report.failures.push_back("point " + std::to_string(c.member_ids[m]) + " is " +
                                  std::to_string(d) + " from center " + std::to_string(c.center_id));
      }
    }
    if (radius != c.observed_radius) {
      report.observed_radius = false;
      report.failures.push_back("cluster " + std::to_string(c.center_id) + " stores radius " +
                                std::to_string(c.observed_radius) + ", actual " +
                                std::to_string(radius));
    }
  }
  return report;
}

std::size_t count_nearest_center_violations(const ClusteredDatabase& db) {
  const std::size_t dim = db.dimension();
  const DistanceFunction& dist = db.distance_function();
  const auto clusters = db.clusters();
  const auto centers = db.center_coords();
  const auto norms = db.center_norms();
  std::size_t violations = 0;
  for (std::size_t own = 0; own < clusters.size(); ++own) {
    const Cluster& c = clusters[own];
    for (std::size_t m = 0; m < c.size(); ++m) {
      const double* p = c.coords.data() + m * dim;
      std::size_t best = 0;
      double best_d = 0.0;
      for (std::size_t j = 0; j < clusters.size(); ++j) {
        const double d = dist.with_norms(p, c.norms[m], centers.data() + j * dim, norms[j], dim);
        if (j == 0 || d < best_d || (d == best_d && clusters[j].center_id < clusters[best].center_id)) {
          best = j;
          best_d = d;
        }
      }
      if (best != own) ++violations;
    }
  }
  return violations;
}

}  // namespace escale
