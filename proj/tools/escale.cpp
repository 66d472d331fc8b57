// SPDX-License-Identifier: Apache-2.0
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_source_flags(CLI::App* cmd, escale::cli::DatasetSource& src) {
  cmd->add_option("--input", src.input, "Dataset file");
  cmd->add_option("--format", src.format, "Dataset file format")->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--generate", src.generate, "Synthetic dataset spec, e.g. tree_cloud:n=10000,dim=32");
  cmd->add_option("--distance", src.distance, "Distance function")
      ->check(CLI::IsMember({"euclidean", "cosine", "hamming", "jaccard"}));
  cmd->add_flag("--counts", src.counts, "Coordinates are non-negative frequency counts");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace escale::cli;
  CLI::App app{"Clustered exact radius search: index build, queries, diagnostics, benchmarks"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Cluster a dataset and write a compressed store");
  add_source_flags(build_cmd, build.source);
  build_cmd->add_option("--rc", build.r_c, "Maximum cluster radius")->required();
  build_cmd->add_option("--seed", build.seed, "Permutation seed");
  build_cmd->add_option("--output", build.output, "Store path")->required();
  build_cmd->add_option("--threads", build.threads, "Worker threads (default: ESCALE_THREADS or all cores)");

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Radius query against a store");
  query_cmd->add_option("--store", query.store, "Store path")->required();
  query_cmd->add_option("--query", query.query, "Query coordinates, comma-separated");
  query_cmd->add_option("--query-file", query.query_file, "File of query points");
  query_cmd->add_option("--format", query.format, "Query file format")->check(CLI::IsMember({"csv", "jsonl"}));
  query_cmd->add_option("--radius", query.radius, "Search radius")->required();
  query_cmd->add_option("--coarse-scale", query.coarse_scale, "Multiplier on the coarse radius r + r_c");

  QueryArgs brute;
  auto* brute_cmd = app.add_subcommand("brute", "Brute-force radius query over every stored point");
  brute_cmd->add_option("--store", brute.store, "Store path")->required();
  brute_cmd->add_option("--query", brute.query, "Query coordinates, comma-separated");
  brute_cmd->add_option("--query-file", brute.query_file, "File of query points");
  brute_cmd->add_option("--format", brute.format, "Query file format")->check(CLI::IsMember({"csv", "jsonl"}));
  brute_cmd->add_option("--radius", brute.radius, "Search radius")->required();

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Index and dataset diagnostics");
  stats_cmd->add_option("--store", stats.store, "Store path")->required();
  stats_cmd->add_option("--grid", stats.grid, "Radius grid: a,b,c or start:step:stop")->required();
  stats_cmd->add_option("--samples", stats.samples, "Sample points for the dimension profile");
  stats_cmd->add_option("--seed", stats.seed, "Sampling seed");
  stats_cmd->add_option("--alpha", stats.alpha, "Triangle violations: none, auto, exhaustive, or a triple count");
  stats_cmd->add_option("--density-radius", stats.density_radius, "Radius for the density-uniformity factor");
  stats_cmd->add_option("--threads", stats.threads, "Worker threads");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Naive vs accelerated search over an (r_c x r x query) grid");
  add_source_flags(bench_cmd, bench.source);
  bench_cmd->add_option("--rc", bench.rc_list, "Cluster radii: a,b,c or start:step:stop")->required();
  bench_cmd->add_option("--radius", bench.radius_list, "Search radii: a,b,c or start:step:stop")->required();
  bench_cmd->add_option("--queries", bench.queries, "Number of seeded query points drawn from the dataset");
  bench_cmd->add_option("--query-ids", bench.query_ids, "Explicit comma-separated query point ids");
  bench_cmd->add_option("--seed", bench.seed, "Seed for clustering and query sampling");
  bench_cmd->add_option("--repeats", bench.repeats, "Timing repetitions per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--threads", bench.threads, "Worker threads");
  bench_cmd->add_option("--output", bench.output, "CSV path (default stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic dataset");
  add_source_flags(gen_cmd, gen.source);
  gen_cmd->add_option("--output", gen.output, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build_cmd) return cmd_build(build);
    if (*query_cmd) return cmd_query(query, false);
    if (*brute_cmd) return cmd_query(brute, true);
    if (*stats_cmd) return cmd_stats(stats);
    if (*bench_cmd) return cmd_bench(bench);
    if (*gen_cmd) return cmd_generate(gen);
  } catch (const UsageError& e) {
    std::cerr << "escale: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "escale: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
