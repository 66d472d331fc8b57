// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "escale/core/dataset.hpp"
#include "escale/core/eval_counter.hpp"

namespace escale {

// Growth exponent of ball populations: log(n2/n1) / log(r2/r1).
// Empty when n1 == 0. Throws std::invalid_argument unless 0 < r1 < r2.
std::optional<double> local_dimension_from_counts(std::size_t n1, std::size_t n2, double r1,
                                                  double r2);

// Local fractal dimension around q, with n1, n2 taken from brute-force
// balls. A dataset point whose id equals q.id is not counted.
std::optional<double> local_fractal_dimension(const Dataset& dataset, const PointRef& q,
                                              double r1, double r2,
                                              EvalCounter* counter = nullptr);

struct FractalDimensionProfile {
  std::vector<double> radius_grid;
  std::vector<PointId> sample_ids;
  // samples x (grid.size() - 1), row-major; empty where n1 == 0.
  std::vector<std::optional<double>> per_point_dims;
  // Mean over the defined entries of each column.
  std::vector<std::optional<double>> mean_dims;
  std::uint64_t sample_seed = 0;

  std::size_t steps() const { return radius_grid.empty() ? 0 : radius_grid.size() - 1; }
  std::optional<double> dim(std::size_t sample, std::size_t step) const {
    return per_point_dims[sample * steps() + step];
  }
  // Mean over every defined entry of the matrix.
  std::optional<double> overall_mean() const;
};

// Samples `samples` distinct dataset points (clamped to n) with a seeded
// generator and records the local dimension between each pair of
// consecutive grid radii. The grid must be strictly ascending, positive,
// with at least two entries.
FractalDimensionProfile fractal_profile(const Dataset& dataset, std::size_t samples,
                                        std::span<const double> grid, std::uint64_t seed,
                                        EvalCounter* counter = nullptr, std::size_t threads = 1);

// Greedy center count at each radius: a stand-in for the covering number
// N_rho(D), which is NP-hard to compute exactly. Builds one index per
// radius.
std::vector<std::size_t> metric_entropy_proxy(const Dataset& dataset,
                                              std::span<const double> radii, std::uint64_t seed);

// Scale-interval dimension from covering counts:
//   max over rho in (rho_1, rho_m] of log(N_rho / N_rho1) / log(rho_1 / rho)
// with radii[0] as rho_1. Feed it metric_entropy_proxy() counts, so the
// result is a proxy as well. Empty when fewer than two radii.
std::optional<double> covering_dimension(std::span<const double> radii,
                                         std::span<const std::size_t> counts);

}  // namespace escale
