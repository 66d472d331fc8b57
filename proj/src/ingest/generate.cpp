// SPDX-License-Identifier: Apache-2.0
#include "escale/ingest/generate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "escale/core/rng.hpp"
#include "escale/ingest/parse.hpp"

namespace escale::ingest {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::uniform_cube: return "uniform_cube";
    case GeneratorKind::gaussian_mixture: return "gaussian_mixture";
    case GeneratorKind::tree_cloud: return "tree_cloud";
    case GeneratorKind::segment: return "segment";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "uniform_cube") return GeneratorKind::uniform_cube;
  if (name == "gaussian_mixture") return GeneratorKind::gaussian_mixture;
  if (name == "tree_cloud") return GeneratorKind::tree_cloud;
  if (name == "segment") return GeneratorKind::segment;
  throw std::invalid_argument("unknown generator kind '" + std::string(name) + "'");
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw std::invalid_argument("generator parameter " + std::string(key) + "='" +
                                std::string(value) + "' is not a valid number");
  }
  return out;
}

void check(const GeneratorSpec& s) {
  if (s.dimension < 1) throw std::invalid_argument("generator dimension must be >= 1");
  if (!(s.scale > 0.0)) throw std::invalid_argument("generator scale must be positive");
  if (!(s.sigma >= 0.0)) throw std::invalid_argument("tree_cloud sigma must be >= 0");
  if (!(s.spread >= 0.0)) throw std::invalid_argument("mixture spread must be >= 0");
  if (!(s.turn >= 0.0)) throw std::invalid_argument("tree_cloud turn must be >= 0");
  if (s.kind == GeneratorKind::tree_cloud) {
    if (s.branches < 1 || s.walk_steps < 1) throw std::invalid_argument("tree_cloud needs branches and steps >= 1");
    if (!(s.branch_length > 0.0)) throw std::invalid_argument("tree_cloud branch length must be positive");
  }
  if (s.kind == GeneratorKind::gaussian_mixture) {
    if (s.components < 1) throw std::invalid_argument("mixture needs at least one component");
    if (s.counts && (s.active_dims < 1 || s.active_dims > s.dimension)) {
      throw std::invalid_argument("mixture active dims must be in [1, dim]");
    }
    if (s.counts && !(s.scale > 1.0)) throw std::invalid_argument("count mixture needs scale > 1");
  }
}

std::vector<double> unit_direction(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = rng.normal();
    norm = 0.0;
    for (const double x : v) norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

// A branch as a polyline of equal-length pieces.
struct Branch {
  std::vector<std::vector<double>> vertices;
  double piece_length = 0.0;

  std::vector<double> at(double t) const {  // t in [0, 1]
    const std::size_t pieces = vertices.size() - 1;
    const double pos = t * static_cast<double>(pieces);
    const std::size_t i = std::min(static_cast<std::size_t>(pos), pieces - 1);
    const double frac = pos - static_cast<double>(i);
    std::vector<double> out(vertices[i].size());
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = vertices[i][j] + frac * (vertices[i + 1][j] - vertices[i][j]);
    }
    return out;
  }
};

void generate_tree(const GeneratorSpec& s, Rng& rng, Dataset& out) {
  const std::size_t dim = s.dimension;
  std::vector<Branch> branches;
  for (std::size_t b = 0; b < s.branches; ++b) {
    Branch br;
    br.piece_length = s.branch_length / static_cast<double>(s.walk_steps);
    std::vector<double> start(dim, 0.0);
    if (b > 0) start = branches[rng.below(b)].at(rng.uniform01());
    std::vector<double> dir = unit_direction(rng, dim);
    br.vertices.push_back(start);
    for (std::size_t step = 0; step < s.walk_steps; ++step) {
      std::vector<double> next = br.vertices.back();
      for (std::size_t j = 0; j < dim; ++j) next[j] += br.piece_length * dir[j];
      br.vertices.push_back(std::move(next));
      double norm = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        dir[j] += s.turn * rng.normal();
        norm += dir[j] * dir[j];
      }
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& x : dir) x /= norm;
      } else {
        dir = unit_direction(rng, dim);
      }
    }
    branches.push_back(std::move(br));
  }
  const double noise = s.sigma / std::sqrt(static_cast<double>(dim));
  for (std::size_t i = 0; i < s.n; ++i) {
    std::vector<double> p = branches[rng.below(branches.size())].at(rng.uniform01());
    for (double& x : p) x += noise * rng.normal();
    out.add(i, p);
  }
}

void generate_mixture(const GeneratorSpec& s, Rng& rng, Dataset& out) {
  const std::size_t dim = s.dimension;
  std::vector<std::vector<double>> means(s.components, std::vector<double>(dim, 0.0));
  for (auto& m : means) {
    if (s.counts) {
      for (const std::size_t j : rng.sample_indices(dim, s.active_dims)) m[j] = rng.uniform(1.0, s.scale);
    } else {
      for (double& x : m) x = rng.uniform(0.0, s.scale);
    }
  }
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < s.n; ++i) {
    const auto& m = means[rng.below(means.size())];
    bool nonzero = false;
    while (!nonzero) {
      for (std::size_t j = 0; j < dim; ++j) {
        double v = m[j] + s.spread * rng.normal();
        if (s.counts) v = std::round(std::max(0.0, v));
        p[j] = v;
        nonzero = nonzero || v != 0.0;
      }
      // Only count vectors can come out all-zero in practice; redraw them.
      if (!s.counts) nonzero = true;
    }
    out.add(i, p);
  }
}

}  // namespace

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  const std::size_t colon = text.find(':');
  spec.kind = parse_generator_kind(text.substr(0, colon));
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("generator parameter '" + std::string(item) + "' is not key=value");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "n") spec.n = parse_number<std::size_t>(key, value);
    else if (key == "dim") spec.dimension = parse_number<std::size_t>(key, value);
    else if (key == "seed") spec.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "scale") spec.scale = parse_number<double>(key, value);
    else if (key == "branches") spec.branches = parse_number<std::size_t>(key, value);
    else if (key == "length") spec.branch_length = parse_number<double>(key, value);
    else if (key == "sigma") spec.sigma = parse_number<double>(key, value);
    else if (key == "steps") spec.walk_steps = parse_number<std::size_t>(key, value);
    else if (key == "turn") spec.turn = parse_number<double>(key, value);
    else if (key == "components") spec.components = parse_number<std::size_t>(key, value);
    else if (key == "spread") spec.spread = parse_number<double>(key, value);
    else if (key == "counts") spec.counts = parse_number<int>(key, value) != 0;
    else if (key == "active") spec.active_dims = parse_number<std::size_t>(key, value);
    else throw std::invalid_argument("unknown generator parameter '" + std::string(key) + "'");
  }
  return spec;
}

std::string to_string(const GeneratorSpec& s) {
  std::ostringstream out;
  out << to_string(s.kind) << ":n=" << s.n << ",dim=" << s.dimension << ",seed=" << s.seed
      << ",scale=" << format_real(s.scale);
  switch (s.kind) {
    case GeneratorKind::tree_cloud:
      out << ",branches=" << s.branches << ",length=" << format_real(s.branch_length)
          << ",sigma=" << format_real(s.sigma) << ",steps=" << s.walk_steps
          << ",turn=" << format_real(s.turn);
      break;
    case GeneratorKind::gaussian_mixture:
      out << ",components=" << s.components << ",spread=" << format_real(s.spread)
          << ",counts=" << (s.counts ? 1 : 0);
      if (s.counts) out << ",active=" << s.active_dims;
      break;
    default:
      break;
  }
  return out.str();
}

Dataset generate(const GeneratorSpec& spec, DistanceDescriptor distance) {
  check(spec);
  const CoordDomain domain =
      spec.kind == GeneratorKind::gaussian_mixture && spec.counts ? CoordDomain::frequency : CoordDomain::real;
  Dataset out(spec.dimension, distance, domain);
  Rng rng(spec.seed);
  switch (spec.kind) {
    case GeneratorKind::uniform_cube: {
      std::vector<double> p(spec.dimension);
      for (std::size_t i = 0; i < spec.n; ++i) {
        for (double& x : p) x = rng.uniform(0.0, spec.scale);
        out.add(i, p);
      }
      break;
    }
    case GeneratorKind::segment: {
      std::vector<double> p(spec.dimension, 0.0);
      for (std::size_t i = 0; i < spec.n; ++i) {
        p[0] = rng.uniform(0.0, spec.scale);
        out.add(i, p);
      }
      break;
    }
    case GeneratorKind::gaussian_mixture:
      generate_mixture(spec, rng, out);
      break;
    case GeneratorKind::tree_cloud:
      generate_tree(spec, rng, out);
      break;
  }
  return out;
}

}  // namespace escale::ingest
