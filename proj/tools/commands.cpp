// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "escale/analysis/diagnostics.hpp"
#include "escale/analysis/fractal.hpp"
#include "escale/clustering/clustered_database.hpp"
#include "escale/core/parallel.hpp"
#include "escale/core/rng.hpp"
#include "escale/ingest/generate.hpp"
#include "escale/ingest/parse.hpp"
#include "escale/search/search.hpp"
#include "escale/storage/store.hpp"

namespace escale::cli {

using ingest::format_real;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> parse_real_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

std::string describe(const DatasetSource& src) {
  return src.generate.empty() ? "input=" + src.input : "generate=" + src.generate;
}

Dataset load_source(const DatasetSource& src) {
  if (src.input.empty() == src.generate.empty()) {
    throw UsageError("give exactly one of --input or --generate");
  }
  const DistanceDescriptor distance(parse_distance_kind(src.distance));
  if (!src.generate.empty()) {
    ingest::GeneratorSpec spec;
    try {
      spec = ingest::parse_generator_spec(src.generate);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    Dataset ds = ingest::generate(spec, distance);
    if (!src.counts) return ds;
    Dataset freq(ds.dimension(), distance, CoordDomain::frequency);
    for (std::size_t i = 0; i < ds.size(); ++i) freq.add(ds[i].id, ds[i].coords);
    return freq;
  }
  return ingest::parse_vectors(src.input, ingest::parse_format(src.format), distance,
                               src.counts ? CoordDomain::frequency : CoordDomain::real);
}

std::vector<Point> load_queries(const QueryArgs& args, DistanceDescriptor distance) {
  if (args.query.empty() == args.query_file.empty()) {
    throw UsageError("give exactly one of --query or --query-file");
  }
  if (!args.query.empty()) return {Point{0, parse_real_list(args.query, "--query")}};
  const Dataset ds = ingest::parse_vectors(args.query_file, ingest::parse_format(args.format), distance);
  std::vector<Point> out;
  for (std::size_t i = 0; i < ds.size(); ++i) out.push_back(ds.point(i));
  return out;
}

void print_hits(std::ostream& out, const std::vector<Hit>& hits, std::optional<PointId> query_id) {
  for (const Hit& h : hits) {
    if (query_id) out << *query_id << ' ';
    out << h.id << ' ' << format_real(h.distance) << '\n';
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw UsageError("empty grid");
  if (text.find(':') != std::string::npos) {
    const std::vector<double> parts = parse_real_list(
        [&] {
          std::string t = text;
          std::replace(t.begin(), t.end(), ':', ',');
          return t;
        }(),
        "grid");
    if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
      throw UsageError("range grid must be start:step:stop with step > 0 and stop >= start");
    }
    std::vector<double> out;
    // Index-based so accumulated rounding cannot drop the last point.
    const auto count = static_cast<std::size_t>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[1]);
    return out;
  }
  return parse_real_list(text, "grid");
}

int cmd_build(const BuildArgs& args) {
  if (!(args.r_c >= 0.0)) throw UsageError("--rc must be non-negative");
  if (args.output.empty()) throw UsageError("--output is required");
  const Dataset dataset = load_source(args.source);

  const auto start = Clock::now();
  EvalCounter counter;
  const ClusteredDatabase db =
      ClusteredDatabase::build(dataset, args.r_c, args.seed, &counter, resolve_threads(args.threads));
  const double build_seconds = seconds_since(start);
  storage::CompressionStats stats;
  try {
    stats = storage::write_database(db, args.output);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(args.output, ec);
    throw;
  }

  std::cout << "n=" << db.size() << '\n'
            << "k=" << db.k() << '\n'
            << "predicted_speedup=" << (db.k() == 0 ? std::string("nan") : format_real(predicted_speedup(db)))
            << '\n'
            << "build_evals=" << counter.build_evals() << '\n'
            << "build_seconds=" << format_real(build_seconds) << '\n'
            << "s_orig_bytes=" << stats.s_orig_bytes << '\n'
            << "s_orig_compressed_bytes=" << stats.s_orig_compressed_bytes << '\n'
            << "s_clust_bytes=" << stats.s_clust_bytes << '\n'
            << "index_bytes=" << stats.index_bytes << '\n'
            << "file_bytes=" << stats.file_bytes << '\n';
  return kExitOk;
}

int cmd_query(const QueryArgs& args, bool brute_force) {
  if (!(args.radius >= 0.0)) throw UsageError("--radius must be non-negative");
  if (!(args.coarse_scale > 0.0)) throw UsageError("--coarse-scale must be positive");
  const storage::CompressedStore store = storage::CompressedStore::open(args.store);
  const std::vector<Point> queries = load_queries(args, DistanceDescriptor(store.header().distance));
  const bool many = !args.query_file.empty();

  if (brute_force) {
    const Dataset dataset = storage::read_database(store).to_dataset();
    for (const Point& q : queries) {
      if (q.coords.size() != store.dimension()) {
        throw std::invalid_argument("query has " + std::to_string(q.coords.size()) +
                                    " coordinates, store dimension is " + std::to_string(store.dimension()));
      }
      const std::vector<double> d = distances_from(dataset, q.coords);
      std::vector<Hit> hits;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] <= args.radius) hits.push_back(Hit{dataset.id(i), d[i]});
      }
      sort_hits(hits);
      print_hits(std::cout, hits, many ? std::optional(q.id) : std::nullopt);
      std::cerr << "oracle_evals=" << dataset.size() << '\n';
    }
    return kExitOk;
  }

  SearchOptions options;
  options.coarse_radius_scale = args.coarse_scale;
  for (const Point& q : queries) {
    const QueryResult result = storage::search_on_store(store, q.coords, args.radius, options);
    print_hits(std::cout, result.hits, many ? std::optional(q.id) : std::nullopt);
    std::cerr << "coarse_evals=" << result.stats.coarse_evals << " fine_evals=" << result.stats.fine_evals
              << " clusters_scanned=" << result.stats.clusters_scanned << '\n';
  }
  return kExitOk;
}

int cmd_stats(const StatsArgs& args) {
  const std::vector<double> grid = parse_grid(args.grid);
  if (grid.size() < 2 || !(grid.front() > 0.0) ||
      std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<>()) != grid.end()) {
    throw UsageError("--grid needs at least two positive, strictly ascending radii");
  }
  if (args.samples == 0) throw UsageError("--samples must be positive");
  const storage::CompressedStore store = storage::CompressedStore::open(args.store);
  const ClusteredDatabase db = storage::read_database(store);
  const Dataset dataset = db.to_dataset();

  std::cout << "n=" << db.size() << '\n' << "k=" << db.k() << '\n' << "r_c=" << format_real(db.r_c()) << '\n';
  if (db.k() > 0) {
    std::cout << "n_over_k=" << format_real(predicted_speedup(db)) << '\n';
  }
  if (dataset.empty()) return kExitOk;

  const FractalDimensionProfile profile =
      fractal_profile(dataset, args.samples, grid, args.seed, nullptr, resolve_threads(args.threads));
  std::cout << "profile_samples=" << profile.sample_ids.size() << '\n';
  for (std::size_t j = 0; j < profile.steps(); ++j) {
    std::size_t defined = 0;
    for (std::size_t s = 0; s < profile.sample_ids.size(); ++s) defined += profile.dim(s, j) ? 1 : 0;
    std::cout << "profile r1=" << format_real(grid[j]) << " r2=" << format_real(grid[j + 1]) << " mean_d="
              << (profile.mean_dims[j] ? format_real(*profile.mean_dims[j]) : std::string("nan"))
              << " defined=" << defined << '\n';
  }
  if (const auto mean = profile.overall_mean()) std::cout << "mean_local_dimension=" << format_real(*mean) << '\n';

  if (args.alpha != "none") {
    if (dataset.size() < 3) throw UsageError("--alpha needs at least 3 points");
    TripleSampling sampling;
    if (args.alpha == "exhaustive") {
      sampling = TripleSampling::exhaustive();
    } else if (args.alpha != "auto") {
      const std::vector<double> v = parse_real_list(args.alpha, "--alpha");
      if (v.size() != 1 || !(v[0] >= 1.0)) throw UsageError("--alpha must be none, auto, exhaustive or a count");
      sampling = TripleSampling::sampled(static_cast<std::size_t>(v[0]));
    }
    const TriangleViolationReport tv = triangle_violation_rate(dataset, sampling, args.seed);
    std::cout << "alpha=" << format_real(tv.alpha) << '\n'
              << "alpha_triples=" << tv.triples_sampled << '\n'
              << "alpha_violations=" << tv.violations << '\n'
              << "alpha_exhaustive=" << (tv.exhaustive ? 1 : 0) << '\n';
  }

  const double density_radius = args.density_radius.value_or(db.r_c() > 0.0 ? db.r_c() : grid.front());
  if (!(density_radius > 0.0)) throw UsageError("--density-radius must be positive");
  const DensityUniformityReport du = density_uniformity(dataset, density_radius, args.samples, args.seed);
  std::cout << "density_radius=" << format_real(du.radius) << '\n'
            << "density_min=" << format_real(du.min_count) << '\n'
            << "density_max=" << format_real(du.max_count) << '\n'
            << "density_mean=" << format_real(du.mean_count) << '\n'
            << "density_zero_samples=" << du.zero_count_samples << '\n'
            << "gamma_hat=" << format_real(du.gamma_hat) << '\n';
  return kExitOk;
}

int cmd_bench(const BenchArgs& args) {
  const std::vector<double> rcs = parse_grid(args.rc_list);
  const std::vector<double> radii = parse_grid(args.radius_list);
  if (rcs.empty() || radii.empty()) throw UsageError("--rc and --radius grids must be non-empty");
  if (std::any_of(rcs.begin(), rcs.end(), [](double v) { return !(v >= 0.0); }) ||
      std::any_of(radii.begin(), radii.end(), [](double v) { return !(v >= 0.0); })) {
    throw UsageError("radii must be non-negative");
  }
  if (args.repeats == 0) throw UsageError("--repeats must be positive");
  const Dataset dataset = load_source(args.source);
  if (dataset.empty()) throw UsageError("benchmark dataset is empty");

  std::vector<std::size_t> query_idx;
  std::string selection;
  if (!args.query_ids.empty()) {
    for (const double v : parse_real_list(args.query_ids, "--query-ids")) {
      const auto idx = dataset.index_of(static_cast<PointId>(v));
      if (v < 0 || !idx) throw UsageError("query id " + format_real(v) + " is not in the dataset");
      query_idx.push_back(*idx);
    }
    selection = "explicit";
  } else {
    if (args.queries == 0) throw UsageError("--queries must be positive");
    Rng rng(args.seed ^ 0x9e3779b97f4a7c15ull);
    query_idx = rng.sample_indices(dataset.size(), args.queries);
    selection = "seeded_sample seed=" + std::to_string(args.seed);
  }
  std::sort(query_idx.begin(), query_idx.end(),
            [&](std::size_t a, std::size_t b) { return dataset.id(a) < dataset.id(b); });

  std::ofstream file;
  if (!args.output.empty()) {
    file.open(args.output);
    if (!file) throw std::runtime_error("cannot write " + args.output);
  }
  std::ostream& out = args.output.empty() ? std::cout : file;

  out << "# escale bench\n"
      << "# dataset " << describe(args.source) << " n=" << dataset.size() << " dim=" << dataset.dimension()
      << " distance=" << dataset.distance().name() << '\n'
      << "# queries " << selection << " ids=";
  for (std::size_t i = 0; i < query_idx.size(); ++i) out << (i ? "," : "") << dataset.id(query_idx[i]);
  out << "\n# repeats=" << args.repeats << " seed=" << args.seed << " wall times in microseconds, mean per run\n"
      << "query_id,r,r_c,naive_evals,coarse_evals,fine_evals,acceleration,recall,naive_wall_us,accel_wall_us\n";

  struct Cell {
    std::uint64_t coarse = 0;
    std::uint64_t fine = 0;
    double recall = 1.0;
    double naive_us = 0.0;
    double accel_us = 0.0;
  };
  SearchOptions timed;
  timed.sort_hits = false;
  const std::size_t threads = resolve_threads(args.threads);

  for (const double r_c : rcs) {
    const ClusteredDatabase db = ClusteredDatabase::build(dataset, r_c, args.seed, nullptr, threads);
    std::cerr << "r_c=" << format_real(r_c) << " k=" << db.k() << '\n';
    std::vector<Cell> cells(query_idx.size() * radii.size());
    parallel_for(query_idx.size(), threads, [&](std::size_t qi) {
      const auto q = dataset.coords(query_idx[qi]);
      for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        const double r = radii[ri];
        Cell& cell = cells[qi * radii.size() + ri];
        std::vector<PointId> oracle;
        auto start = Clock::now();
        for (std::size_t rep = 0; rep < args.repeats; ++rep) oracle = ball(dataset, q, r);
        cell.naive_us = seconds_since(start) * 1e6 / static_cast<double>(args.repeats);
        QueryResult result;
        start = Clock::now();
        for (std::size_t rep = 0; rep < args.repeats; ++rep) result = search(db, q, r, timed);
        cell.accel_us = seconds_since(start) * 1e6 / static_cast<double>(args.repeats);
        cell.coarse = result.stats.coarse_evals;
        cell.fine = result.stats.fine_evals;
        cell.recall = compare_to_oracle(result, oracle).recall;
      }
    });
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
      for (std::size_t qi = 0; qi < query_idx.size(); ++qi) {
        const Cell& c = cells[qi * radii.size() + ri];
        const std::uint64_t accel = c.coarse + c.fine;
        out << dataset.id(query_idx[qi]) << ',' << format_real(radii[ri]) << ',' << format_real(r_c) << ','
            << dataset.size() << ',' << c.coarse << ',' << c.fine << ','
            << format_real(accel == 0 ? 0.0 : static_cast<double>(dataset.size()) / static_cast<double>(accel))
            << ',' << format_real(c.recall) << ',' << format_real(c.naive_us) << ',' << format_real(c.accel_us)
            << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_generate(const GenerateArgs& args) {
  const Dataset dataset = load_source(args.source);
  const ingest::Format format = ingest::parse_format(args.source.format);
  if (args.output.empty()) {
    ingest::export_vectors(dataset, format, std::cout);
    return kExitOk;
  }
  std::ofstream out(args.output);
  if (!out) throw std::runtime_error("cannot write " + args.output);
  ingest::export_vectors(dataset, format, out);
  if (!out) throw std::runtime_error("write failed on " + args.output);
  return kExitOk;
}

}  // namespace escale::cli
