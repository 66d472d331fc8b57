// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "escale/clustering/clustered_database.hpp"
#include "escale/core/rng.hpp"
#include "escale/ingest/generate.hpp"
#include "escale/search/search.hpp"

using namespace escale;

namespace {

const DistanceDescriptor kEuclid(DistanceKind::euclidean);

Dataset line(std::initializer_list<double> xs) {
  Dataset ds(1, kEuclid);
  PointId id = 0;
  for (const double x : xs) ds.add(id++, std::vector<double>{x});
  return ds;
}

std::vector<PointId> hit_ids(const QueryResult& r) {
  std::vector<PointId> ids;
  for (const auto& h : r.hits) ids.push_back(h.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

Dataset cloud(DistanceDescriptor desc, std::size_t n, std::uint64_t seed) {
  ingest::GeneratorSpec spec;
  spec.kind = ingest::GeneratorKind::gaussian_mixture;
  spec.dimension = 5;
  spec.n = n;
  spec.seed = seed;
  spec.spread = 0.08;
  spec.scale = 2.0;
  return ingest::generate(spec, desc);
}

}  // namespace

TEST_CASE("coarse threshold arithmetic") {
  // Centers at distance 0.5 and 3.0 from q = 0; r + r_c = 2.
  const auto db = ClusteredDatabase::build(line({0.5, 3.0}), 1.0, 1);
  REQUIRE(db.k() == 2);
  const std::vector<double> q{0.0};
  const auto cand = coarse_search(db, q, 1.0);
  REQUIRE(cand.cluster_ids.size() == 1);
  CHECK(db.cluster(cand.cluster_ids[0]).center_id == 0);
  CHECK(cand.coarse_evals == 2);

  const auto all = coarse_search(db, q, 3.0);
  CHECK(all.cluster_ids.size() == 2);

  // r = 0 at a center still returns that center's cluster.
  const auto self = coarse_search(db, std::vector<double>{3.0}, 0.0);
  REQUIRE(self.cluster_ids.size() == 1);
  CHECK(db.cluster(self.cluster_ids[0]).center_id == 1);
}

TEST_CASE("fine search filters rather than prunes") {
  const auto db = ClusteredDatabase::build(line({0.0, 0.9, 5.0}), 1.0, 2);
  const std::vector<double> q{0.45};
  EvalCounter counter;
  CandidateSet empty;
  empty.db_instance = db.instance_id();
  empty.db_revision = db.revision();
  const auto none = fine_search(db, empty, q, 0.1, {}, &counter);
  CHECK(none.hits.empty());
  CHECK(counter.fine_evals() == 0);

  const auto cand = coarse_search(db, q, 0.1);
  const auto res = fine_search(db, cand, q, 0.1, {}, &counter);
  CHECK(res.hits.empty());
  CHECK(res.stats.fine_evals > 0);
  CHECK(counter.fine_evals() == res.stats.fine_evals);
}

TEST_CASE("stale candidate sets are rejected") {
  auto db = ClusteredDatabase::build(line({0.0, 2.0, 4.0}), 1.0, 2);
  const std::vector<double> q{0.0};
  const auto cand = coarse_search(db, q, 1.0);
  db.insert({9, {8.0}});
  CHECK_THROWS_AS(fine_search(db, cand, q, 1.0), std::logic_error);

  const auto other = ClusteredDatabase::build(line({0.0, 2.0, 4.0}), 1.0, 2);
  CHECK_THROWS_AS(fine_search(other, coarse_search(db, q, 1.0), q, 1.0), std::logic_error);
}

TEST_CASE("query validation") {
  const auto db = ClusteredDatabase::build(line({0.0, 2.0}), 1.0, 2);
  CHECK_THROWS_AS(search(db, std::vector<double>{0.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(search(db, std::vector<double>{0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("single cluster degenerates to brute force") {
  const auto ds = line({0.0, 0.2, 0.4, 0.6});
  const auto db = ClusteredDatabase::build(ds, 10.0, 3);
  REQUIRE(db.k() == 1);
  const std::vector<double> q{0.3};
  const auto res = search(db, q, 0.15);
  CHECK(res.stats.coarse_evals == 1);
  CHECK(res.stats.fine_evals == 4);
  CHECK(hit_ids(res) == ball(ds, q, 0.15));
}

TEST_CASE("hits are sorted by distance then id") {
  const auto db = ClusteredDatabase::build(line({1.0, -1.0, 0.5, 3.0}), 0.8, 3);
  const auto res = search(db, std::vector<double>{0.0}, 2.0);
  REQUIRE(res.hits.size() == 3);
  CHECK(res.hits[0] == Hit{2, 0.5});
  CHECK(res.hits[1] == Hit{0, 1.0});
  CHECK(res.hits[2] == Hit{1, 1.0});
}

TEST_CASE("metric search equals the oracle and accounts exactly") {
  for (const auto kind : {DistanceKind::euclidean, DistanceKind::hamming, DistanceKind::jaccard}) {
    const DistanceDescriptor desc(kind);
    CAPTURE(desc.name());
    Dataset ds = kind == DistanceKind::euclidean ? cloud(desc, 1500, 3) : Dataset(6, desc);
    Rng rng(11);
    if (kind != DistanceKind::euclidean) {
      for (PointId id = 0; id < 600; ++id) {
        std::vector<double> v(6);
        for (double& x : v) x = static_cast<double>(rng.below(3));
        ds.add(id, v);
      }
    }
    const double r_c = kind == DistanceKind::euclidean ? 0.2 : (kind == DistanceKind::hamming ? 2.0 : 0.4);
    const auto db = ClusteredDatabase::build(ds, r_c, 5);
    for (int t = 0; t < 60; ++t) {
      const auto q = ds.point(rng.below(ds.size())).coords;
      const double r = r_c * rng.uniform(0.0, 3.0);
      EvalCounter counter;
      const auto cand = coarse_search(db, q, r, {}, &counter);
      const auto res = fine_search(db, cand, q, r, {}, &counter);
      CHECK(hit_ids(res) == ball(ds, q, r));
      CHECK(counter.coarse_evals() == db.k());
      CHECK(counter.fine_evals() == cand.total_members);
      std::size_t members = 0;
      for (const auto c : cand.cluster_ids) members += db.cluster(c).size();
      CHECK(cand.total_members == members);
      CHECK(res.stats.clusters_scanned == cand.cluster_ids.size());
    }
  }
}

TEST_CASE("hit sets grow with r") {
  const auto ds = cloud(kEuclid, 1000, 6);
  const auto db = ClusteredDatabase::build(ds, 0.25, 1);
  const auto q = ds.point(17).coords;
  std::vector<PointId> prev;
  for (double r = 0.0; r <= 3.0; r += 0.1) {
    const auto ids = hit_ids(search(db, q, r));
    CHECK(std::includes(ids.begin(), ids.end(), prev.begin(), prev.end()));
    prev = ids;
  }
  CHECK(prev.size() == ds.size());
}

TEST_CASE("cosine search never returns a false hit") {
  const DistanceDescriptor desc(DistanceKind::cosine);
  const auto ds = cloud(desc, 800, 9);
  const auto db = ClusteredDatabase::build(ds, 0.05, 4);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto q = ds.point(rng.below(ds.size())).coords;
    const double r = rng.uniform(0.0, 0.2);
    const auto oracle = ball(ds, q, r);
    for (const PointId id : hit_ids(search(db, q, r))) {
      CHECK(std::binary_search(oracle.begin(), oracle.end(), id));
    }
  }
}

TEST_CASE("batch search matches one-at-a-time results") {
  const auto ds = cloud(kEuclid, 600, 2);
  const auto db = ClusteredDatabase::build(ds, 0.2, 1);
  std::vector<RadiusQuery> qs;
  for (std::size_t i = 0; i < 40; ++i) qs.push_back({ds.point(i * 7).coords, 0.05 * static_cast<double>(i % 9)});
  EvalCounter counter;
  const auto batch = search_batch(db, qs, {}, &counter, 4);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const auto single = search(db, qs[i].coords, qs[i].r);
    CHECK(batch[i].hits == single.hits);
    total += single.stats.coarse_evals + single.stats.fine_evals;
  }
  CHECK(counter.coarse_evals() + counter.fine_evals() == total);
}
