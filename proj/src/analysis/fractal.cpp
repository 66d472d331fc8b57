// SPDX-License-Identifier: Apache-2.0
#include "escale/analysis/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "escale/clustering/clustered_database.hpp"
#include "escale/core/parallel.hpp"
#include "escale/core/rng.hpp"

namespace escale {

std::optional<double> local_dimension_from_counts(std::size_t n1, std::size_t n2, double r1,
                                                  double r2) {
  if (!(r1 > 0.0) || !(r2 > r1)) {
    throw std::invalid_argument("local dimension needs 0 < r1 < r2");
  }
  if (n1 == 0) return std::nullopt;
  return std::log(static_cast<double>(n2) / static_cast<double>(n1)) / std::log(r2 / r1);
}

namespace {

// Points within r, excluding the anchor itself. `sorted` holds the
// distances to every dataset point except the anchor.
std::size_t count_within(std::span<const double> sorted, double r) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), r) - sorted.begin());
}

std::vector<double> sorted_distances_excluding(const Dataset& dataset, const PointRef& q,
                                               EvalCounter* counter) {
  std::vector<double> d = distances_from(dataset, q.coords, counter);
  if (const auto self = dataset.index_of(q.id)) d.erase(d.begin() + static_cast<std::ptrdiff_t>(*self));
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

std::optional<double> local_fractal_dimension(const Dataset& dataset, const PointRef& q,
                                              double r1, double r2, EvalCounter* counter) {
  if (!(r1 > 0.0) || !(r2 > r1)) {
    throw std::invalid_argument("local dimension needs 0 < r1 < r2");
  }
  const std::vector<double> d = sorted_distances_excluding(dataset, q, counter);
  return local_dimension_from_counts(count_within(d, r1), count_within(d, r2), r1, r2);
}

std::optional<double> FractalDimensionProfile::overall_mean() const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : per_point_dims) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

FractalDimensionProfile fractal_profile(const Dataset& dataset, std::size_t samples,
                                        std::span<const double> grid, std::uint64_t seed,
                                        EvalCounter* counter, std::size_t threads) {
  if (grid.size() < 2) throw std::invalid_argument("radius grid needs at least two entries");
  if (!(grid[0] > 0.0)) throw std::invalid_argument("radius grid must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("radius grid must be strictly ascending");
  }

  FractalDimensionProfile profile;
  profile.radius_grid.assign(grid.begin(), grid.end());
  profile.sample_seed = seed;
  Rng rng(seed);
  const std::vector<std::size_t> picks = rng.sample_indices(dataset.size(), samples);
  for (const std::size_t i : picks) profile.sample_ids.push_back(dataset.id(i));

  const std::size_t steps = profile.steps();
  profile.per_point_dims.assign(picks.size() * steps, std::nullopt);
  parallel_for(picks.size(), resolve_threads(threads), [&](std::size_t s) {
    const std::vector<double> d = sorted_distances_excluding(dataset, dataset[picks[s]], counter);
    std::size_t prev = count_within(d, grid[0]);
    for (std::size_t j = 0; j < steps; ++j) {
      const std::size_t next = count_within(d, grid[j + 1]);
      profile.per_point_dims[s * steps + j] = local_dimension_from_counts(prev, next, grid[j], grid[j + 1]);
      prev = next;
    }
  });

  profile.mean_dims.assign(steps, std::nullopt);
  for (std::size_t j = 0; j < steps; ++j) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t s = 0; s < picks.size(); ++s) {
      if (const auto v = profile.per_point_dims[s * steps + j]) {
        sum += *v;
        ++count;
      }
    }
    if (count > 0) profile.mean_dims[j] = sum / static_cast<double>(count);
  }
  return profile;
}

std::vector<std::size_t> metric_entropy_proxy(const Dataset& dataset,
                                              std::span<const double> radii, std::uint64_t seed) {
  std::vector<std::size_t> out;
  out.reserve(radii.size());
  for (const double rho : radii) out.push_back(ClusteredDatabase::build(dataset, rho, seed).k());
  return out;
}

std::optional<double> covering_dimension(std::span<const double> radii,
                                         std::span<const std::size_t> counts) {
  if (radii.size() != counts.size()) throw std::invalid_argument("radii and counts differ in length");
  if (radii.size() < 2) return std::nullopt;
  std::optional<double> best;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[0])) throw std::invalid_argument("radii must exceed the first radius");
    if (counts[0] == 0 || counts[i] == 0) continue;
    const double d = std::log(static_cast<double>(counts[i]) / static_cast<double>(counts[0])) /
                     std::log(radii[0] / radii[i]);
    if (!best || d > *best) best = d;
  }
  return best;
}

}  // namespace escale
