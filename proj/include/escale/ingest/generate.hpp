// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "escale/core/dataset.hpp"

namespace escale::ingest {

enum class GeneratorKind : std::uint8_t { uniform_cube, gaussian_mixture, tree_cloud, segment };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view name);

// Seeded synthetic dataset description. Unused parameters are ignored by
// the other kinds.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::uniform_cube;
  std::size_t dimension = 2;
  std::size_t n = 0;
  std::uint64_t seed = 1;

  // uniform_cube: side length. segment: length along the first axis.
  // gaussian_mixture: component means are drawn from [0, scale)^dim.
  double scale = 1.0;

  // tree_cloud
  std::size_t branches = 8;
  double branch_length = 10.0;
  double sigma = 0.5;          // noise width: typical norm of the offset from the skeleton
  std::size_t walk_steps = 8;  // straight pieces per branch
  double turn = 0.3;           // std-dev of the per-step direction perturbation

  // gaussian_mixture
  std::size_t components = 10;
  double spread = 0.05;  // per-coordinate std-dev around a component mean
  // Integer non-negative counts (frequency vectors). Means become sparse
  // profiles with `active_dims` non-zero entries drawn from [1, scale).
  bool counts = false;
  std::size_t active_dims = 20;
};

// Parses "kind:key=value,key=value". Keys: n, dim, seed, scale, branches,
// length, sigma, steps, turn, components, spread, counts (0/1), active.
GeneratorSpec parse_generator_spec(std::string_view text);

// Canonical "kind:key=value,..." with every parameter the kind uses.
std::string to_string(const GeneratorSpec& spec);

// Deterministic for a fixed spec: the same seed reproduces the same
// dataset bit for bit (see Rng for the draw definitions). Ids are 0..n-1.
//
//   uniform_cube      coords i.i.d. uniform on [0, scale)
//   segment           first coord uniform on [0, scale), the rest 0
//   gaussian_mixture  mean of a uniformly chosen component + N(0, spread^2)
//                     per coordinate; in counts mode clamped at 0, rounded,
//                     and redrawn if all-zero
//   tree_cloud        branch 0 starts at the origin, each later branch at
//                     a uniform point of an earlier one; a branch is a
//                     random walk of walk_steps straight pieces totalling
//                     branch_length. A point is a uniform arc-length
//                     position on a uniform branch plus N(0, sigma^2 / dim)
//                     per coordinate, so its offset has norm ~ sigma.
//
// Counts mode yields a frequency-domain dataset. Throws
// std::invalid_argument on invalid parameters.
Dataset generate(const GeneratorSpec& spec, DistanceDescriptor distance = {});

}  // namespace escale::ingest
