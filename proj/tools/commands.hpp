// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace escale::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr std::uint64_t kDefaultSeed = 20150701;

// Bad flag values detected after parsing; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Where a dataset comes from: a file or a generator spec.
struct DatasetSource {
  std::string input;
  std::string format = "csv";
  std::string generate;
  std::string distance = "euclidean";
  bool counts = false;  // treat coordinates as frequency vectors
};

struct BuildArgs {
  DatasetSource source;
  double r_c = 0.0;
  std::uint64_t seed = kDefaultSeed;
  std::string output;
  std::size_t threads = 0;
};

struct QueryArgs {
  std::string store;
  std::string query;       // comma-separated coordinates
  std::string query_file;  // or a file of query points
  std::string format = "csv";
  double radius = 0.0;
  double coarse_scale = 1.0;
};

struct StatsArgs {
  std::string store;
  std::string grid;
  std::size_t samples = 200;
  std::uint64_t seed = kDefaultSeed;
  std::string alpha = "none";  // none | auto | exhaustive | <triple count>
  std::optional<double> density_radius;
  std::size_t threads = 0;
};

struct BenchArgs {
  DatasetSource source;
  std::string rc_list;
  std::string radius_list;
  std::size_t queries = 4;
  std::string query_ids;
  std::uint64_t seed = kDefaultSeed;
  std::size_t repeats = 5;
  std::size_t threads = 0;
  std::string output;
};

struct GenerateArgs {
  DatasetSource source;
  std::string output;
};

// Comma list ("0.1,0.2") or inclusive range ("start:step:stop").
std::vector<double> parse_grid(const std::string& text);

int cmd_build(const BuildArgs& args);
int cmd_query(const QueryArgs& args, bool brute_force);
int cmd_stats(const StatsArgs& args);
int cmd_bench(const BenchArgs& args);
int cmd_generate(const GenerateArgs& args);

}  // namespace escale::cli
