// SPDX-License-Identifier: Apache-2.0
#include "escale/analysis/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "escale/core/rng.hpp"

namespace escale {

double predicted_speedup(const ClusteredDatabase& db) {
  if (db.k() == 0) throw std::invalid_argument("predicted speedup is undefined for an empty index");
  return static_cast<double>(db.size()) / static_cast<double>(db.k());
}

double predicted_candidate_bound(std::size_t output_size, double r, double r_c, double d,
                                 std::size_t k) {
  if (!(r > 0.0)) throw std::invalid_argument("candidate bound needs r > 0");
  if (!(r_c >= 0.0)) throw std::invalid_argument("candidate bound needs r_c >= 0");
  if (!(d >= 0.0)) throw std::invalid_argument("candidate bound needs d >= 0");
  return static_cast<double>(k) +
         static_cast<double>(output_size) * std::pow((r + 2.0 * r_c) / r, d);
}

namespace {

// d(x,z) > d(x,y) + d(y,z) beyond what rounding of three correctly
// computed distances can produce. A true metric must score exactly zero.
bool violates(double xz, double xy, double yz) {
  const double bound = xy + yz;
  return xz > bound + 8.0 * std::numeric_limits<double>::epsilon() * bound;
}

}  // namespace

TriangleViolationReport triangle_violation_rate(const Dataset& dataset, TripleSampling sampling,
                                                std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n < 3) throw std::invalid_argument("triangle violation rate needs at least 3 points");
  const DistanceFunction dist(dataset.distance());
  TriangleViolationReport report;

  const bool exhaustive =
      sampling.mode == TripleSampling::Mode::exhaustive ||
      (sampling.mode == TripleSampling::Mode::automatic && n <= TripleSampling::exhaustive_cutoff);
  if (exhaustive) {
    std::vector<double> matrix(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        matrix[i * n + j] = matrix[j * n + i] = dist(dataset.coords(i), dataset.coords(j));
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (z == x || z == y) continue;
          ++report.triples_sampled;
          if (violates(matrix[x * n + z], matrix[x * n + y], matrix[y * n + z])) ++report.violations;
        }
      }
    }
    report.exhaustive = true;
  } else {
    Rng rng(seed);
    for (std::size_t t = 0; t < sampling.count; ++t) {
      const auto pick = rng.sample_indices(n, 3);
      const auto x = dataset.coords(pick[0]);
      const auto y = dataset.coords(pick[1]);
      const auto z = dataset.coords(pick[2]);
      ++report.triples_sampled;
      if (violates(dist(x, z), dist(x, y), dist(y, z))) ++report.violations;
    }
  }
  report.alpha = report.triples_sampled == 0
                     ? 0.0
                     : static_cast<double>(report.violations) / static_cast<double>(report.triples_sampled);
  return report;
}

DensityUniformityReport density_uniformity(const Dataset& dataset, double radius,
                                           std::size_t samples, std::uint64_t seed) {
  if (!(radius > 0.0)) throw std::invalid_argument("density radius must be positive");
  if (samples == 0 || dataset.empty()) throw std::invalid_argument("density uniformity needs samples");
  Rng rng(seed);
  const auto picks = rng.sample_indices(dataset.size(), samples);

  DensityUniformityReport report;
  report.radius = radius;
  report.samples = picks.size();
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t counted = 0;
  for (const std::size_t i : picks) {
    const auto within = ball(dataset, dataset.coords(i), radius);
    const double c = static_cast<double>(within.size() - 1);  // the anchor is always in its own ball
    if (c == 0.0) {
      ++report.zero_count_samples;
      continue;
    }
    sum += c;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    ++counted;
  }
  if (counted == 0) return report;
  report.min_count = lo;
  report.max_count = hi;
  report.mean_count = sum / static_cast<double>(counted);
  report.gamma_hat = std::max({1.0, hi / report.mean_count, report.mean_count / lo});
  return report;
}

}  // namespace escale
