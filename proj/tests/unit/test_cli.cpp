// SPDX-License-Identifier: Apache-2.0
// Drives the escale binary end to end.
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "escale/core/rng.hpp"
#include "escale/ingest/generate.hpp"
#include "escale/ingest/parse.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ESCALE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int st = ::pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::map<std::string, std::string> key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos && line.find(' ') == std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("escale-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  Scratch s;
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("build --generate segment:n=10 --rc -1 --output " + (s / "x.esc")).status == 2);
  CHECK_FALSE(fs::exists(s / "x.esc"));
  CHECK(run("build --generate segment:n=10 --rc 0.1 --output " + (s / "x.esc")).status == 0);
  CHECK(run("query --store " + (s / "x.esc") + " --query 0,0 --radius -1").status == 2);
  CHECK(run("stats --store " + (s / "x.esc") + " --grid 0.2,0.1").status == 2);
  CHECK(run("bench --generate segment:n=10 --rc 0.1 --radius ''").status == 2);
}

TEST_CASE("runtime failures exit with 1") {
  Scratch s;
  CHECK(run("query --store " + (s / "missing.esc") + " --query 0 --radius 1").status == 1);
  CHECK(run("build --generate segment:n=10,dim=2 --rc 0.1 --output " + (s / "x.esc")).status == 0);
  CHECK(run("query --store " + (s / "x.esc") + " --query 0,0,0 --radius 1").status == 1);
  {
    std::ofstream(s / "bad.csv") << "1,2\n3\n";
  }
  const auto bad = run("build --input " + (s / "bad.csv") + " --rc 1 --output " + (s / "bad.esc"));
  CHECK(bad.status != 0);
  CHECK_FALSE(fs::exists(s / "bad.esc"));
}

TEST_CASE("build on an empty csv") {
  Scratch s;
  { std::ofstream(s / "empty.csv"); }
  const auto r = run("build --input " + (s / "empty.csv") + " --rc 1 --output " + (s / "e.esc"));
  CHECK(r.status == 0);
  const auto kv = key_values(r.out);
  CHECK(kv.at("k") == "0");
  CHECK(kv.at("n") == "0");
  CHECK(fs::exists(s / "e.esc"));
}

TEST_CASE("build on a tree cloud at branch width") {
  Scratch s;
  const auto r = run("build --generate tree_cloud:n=3000,dim=8,sigma=0.5 --rc 1 --output " + (s / "t.esc"));
  REQUIRE(r.status == 0);
  const auto kv = key_values(r.out);
  CHECK(std::stoul(kv.at("k")) * 10 < 3000);
  CHECK(std::stod(kv.at("predicted_speedup")) == doctest::Approx(3000.0 / std::stod(kv.at("k"))));

  const auto st = run("stats --store " + (s / "t.esc") + " --grid 1,2 --samples 50");
  REQUIRE(st.status == 0);
  const auto skv = key_values(st.out);
  CHECK(skv.at("n_over_k") == kv.at("predicted_speedup"));
}

TEST_CASE("query hits a stored point at distance zero") {
  Scratch s;
  { std::ofstream(s / "p.csv") << "id,x,y\n10,0,0\n11,3,4\n12,0.5,0\n"; }
  REQUIRE(run("build --input " + (s / "p.csv") + " --rc 1 --output " + (s / "p.esc")).status == 0);
  const auto r = run("query --store " + (s / "p.esc") + " --query 3,4 --radius 0");
  CHECK(r.status == 0);
  CHECK(r.out == "11 0\n");
  const auto wide = run("query --store " + (s / "p.esc") + " --query 0,0 --radius 5");
  CHECK(wide.out == "10 0\n12 0.5\n11 5\n");
}

TEST_CASE("query agrees with brute force on seeded cases") {
  Scratch s;
  const auto ds = escale::ingest::generate(
      escale::ingest::parse_generator_spec("gaussian_mixture:n=2000,dim=6,seed=5,spread=0.08"));
  {
    std::ofstream out(s / "d.csv");
    escale::ingest::export_vectors(ds, escale::ingest::Format::csv, out);
  }
  REQUIRE(run("build --input " + (s / "d.csv") + " --rc 0.15 --seed 3 --output " + (s / "d.esc")).status == 0);
  escale::Rng rng(20);
  for (int t = 0; t < 20; ++t) {
    CAPTURE(t);
    std::string q;
    const auto base = ds.coords(rng.below(ds.size()));
    for (const double x : base) {
      if (!q.empty()) q += ",";
      q += escale::ingest::format_real(x + rng.uniform(-0.05, 0.05));
    }
    const std::string r = escale::ingest::format_real(rng.uniform(0.0, 0.4));
    const auto fast = run("query --store " + (s / "d.esc") + " --query " + q + " --radius " + r);
    const auto slow = run("brute --store " + (s / "d.esc") + " --query " + q + " --radius " + r);
    REQUIRE(fast.status == 0);
    REQUIRE(slow.status == 0);
    CHECK(fast.out == slow.out);
  }
}

TEST_CASE("query file output is tagged by query") {
  Scratch s;
  { std::ofstream(s / "p.csv") << "0\n1\n2\n10\n"; }
  { std::ofstream(s / "q.csv") << "id,x\n100,1\n200,10\n"; }
  REQUIRE(run("build --input " + (s / "p.csv") + " --rc 1 --output " + (s / "p.esc")).status == 0);
  const auto r = run("query --store " + (s / "p.esc") + " --query-file " + (s / "q.csv") + " --radius 1");
  CHECK(r.status == 0);
  CHECK(r.out == "100 1 0\n100 0 1\n100 2 1\n200 3 0\n");
}

TEST_CASE("bench emits a deterministic grid") {
  const std::string args =
      "bench --generate tree_cloud:n=1500,dim=4,seed=3 --rc 1,2 --radius 0.25,40 --queries 4 --repeats 1 --seed 7";
  const auto a = run(args);
  const auto b = run(args + " --threads 3");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);

  auto rows = [](const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      out.push_back(cells);
    }
    return out;
  };
  const auto ra = rows(a.out);
  const auto rb = rows(b.out);
  REQUIRE(ra.size() == 1 + 2 * 2 * 4);
  CHECK(ra[0] == std::vector<std::string>{"query_id", "r", "r_c", "naive_evals", "coarse_evals", "fine_evals",
                                          "acceleration", "recall", "naive_wall_us", "accel_wall_us"});
  CHECK(a.out.find("# ") == 0);
  for (std::size_t i = 1; i < ra.size(); ++i) {
    // Everything but the wall-time columns is scheduling independent.
    CHECK(std::vector(ra[i].begin(), ra[i].begin() + 8) == std::vector(rb[i].begin(), rb[i].begin() + 8));
    CHECK(ra[i][7] == "1");
    CHECK(std::stod(ra[i][6]) > 0.0);
  }
  // Ordered by (r_c, r, query_id).
  for (std::size_t i = 2; i < ra.size(); ++i) {
    const auto key = [](const auto& row) {
      return std::make_tuple(std::stod(row[2]), std::stod(row[1]), std::stoull(row[0]));
    };
    CHECK(key(ra[i - 1]) < key(ra[i]));
  }
}

TEST_CASE("thread count falls back to the environment") {
  const std::string args = "bench --generate segment:n=300 --rc 0.05 --radius 0.1 --queries 3 --repeats 1";
  const auto plain = run(args);
  const std::string cmd = "ESCALE_THREADS=2 ";
  FILE* pipe = ::popen((cmd + ESCALE_CLI_PATH + " " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  CHECK(WEXITSTATUS(::pclose(pipe)) == 0);
  CHECK(out.size() > 0);
  CHECK(plain.status == 0);
}

TEST_CASE("generate writes a canonical dataset") {
  const auto r = run("generate --generate segment:n=3,dim=2,seed=4");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("id,c0,c1\n", 0) == 0);
  const auto ds = escale::ingest::parse_vectors_text(r.out, escale::ingest::Format::csv);
  CHECK(ds.size() == 3);
  CHECK(r.out == escale::ingest::export_vectors_text(
                     escale::ingest::generate(escale::ingest::parse_generator_spec("segment:n=3,dim=2,seed=4")),
                     escale::ingest::Format::csv));
}
