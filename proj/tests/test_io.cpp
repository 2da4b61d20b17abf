#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "support.hpp"
#include "wpc/gallery.hpp"
#include "wpc/io.hpp"

using namespace wpc;
using testing::Gen;

namespace {

std::string spec_error(const Json& spec) {
  try {
    map_from_json(spec);
  } catch (const SpecError& e) {
    return e.what();
  }
  return "";
}

// Random strictly increasing lift with one full turn.
RealVector random_lift(Gen& g, long n) {
  RealVector steps(n);
  for (long j = 0; j < n; ++j) steps[j] = g.uniform(0.2, 1.8);
  steps *= kTwoPi / steps.sum();
  RealVector lift(n);
  Real acc = g.uniform(-1, 7);
  for (long j = 0; j < n; ++j) {
    lift[j] = acc;
    acc += steps[j];
  }
  return lift;
}

}  // namespace

TEST_CASE("closed-form families round-trip") {
  const std::vector<Json> specs = {
      Json::parse(R"({"family":"identity","params":{},"grid":64})"),
      Json::parse(R"({"family":"rotation","params":{"beta":0.7},"grid":64})"),
      Json::parse(R"({"family":"mobius","params":{"a_re":0.3,"a_im":-0.2,"beta":1.1},"grid":128})"),
      Json::parse(R"({"family":"sine","params":{"amplitude":0.4},"grid":64})"),
      Json::parse(R"({"family":"sine_flat","params":{},"grid":256})"),
      Json::parse(R"({"family":"wp_counterexample","params":{"alpha":2.0},"grid":512})")};
  for (const Json& s : specs) {
    const CircleMap h = map_from_json(s);
    CHECK(h.family() == s["family"]);
    CHECK(map_to_json(h) == s);
  }
  CHECK(lift_distance(map_from_json(specs[2]), CircleMap::mobius({0.3, -0.2}, 1.1, 128)) == 0);
  // Defaults and the grid override.
  const CircleMap m = map_from_json(Json::parse(R"({"family":"mobius","params":{"a_re":0.5}})"), 32);
  CHECK(m.size() == 32);
  CHECK(lift_distance(m, CircleMap::mobius(0.5, 0, 32)) == 0);
}

TEST_CASE("property: sampled lifts round-trip bit for bit") {
  Gen g(8);
  for (int trial = 0; trial < 20; ++trial) {
    const long n = 1L << g.integer(3, 12);
    const CircleMap h = CircleMap::from_lift(random_lift(g, n));
    const Json j = map_to_json(h);
    CHECK(j["family"] == "samples");
    const Json text = Json::parse(j.dump());
    const CircleMap back = map_from_json(text);
    const RealVector a = h.lift_samples(), b = back.lift_samples();
    bool same = true;
    for (long k = 0; k < n; ++k) same = same && a[k] == b[k];
    CHECK(same);
    CHECK(map_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("maps outside the schema are written as samples") {
  const long n = 64;
  const CircleMap normalized = CircleMap::mobius(0.3, 0.4, n).normalized();
  CHECK(map_to_json(normalized)["family"] == "samples");
  const CircleMap composite = compose(CircleMap::mobius(0.3, 0, n), CircleMap::sine(0.2, n));
  CHECK(composite.family() == "composite");
  const Json j = map_to_json(composite);
  CHECK(j["family"] == "samples");
  CHECK(lift_distance(map_from_json(j), composite) < 1e-15);
}

TEST_CASE("density maps round-trip") {
  const auto u = GridFunction::sample(64, [](Real t) { return 0.3 * std::cos(t) - 0.1 * std::sin(2 * t); },
                                      Sampling::kCellCenters);
  const CircleMap h = from_boundary_density(u, true);
  const Json j = map_to_json(h);
  CHECK(j["family"] == "from_u");
  CHECK(j["params"]["sampling"] == "cells");
  CHECK(j["params"]["renormalize"] == true);
  CHECK(lift_distance(map_from_json(Json::parse(j.dump())), h) == 0);
}

TEST_CASE("malformed specs name the offending field") {
  CHECK(spec_error(Json::parse(R"([1,2])")).find("map spec /:") == 0);
  CHECK(spec_error(Json::parse(R"({"family":"nope","grid":8})")).find("/family") != std::string::npos);
  CHECK(spec_error(Json::parse(R"({"family":"identity"})")).find("/grid") != std::string::npos);
  CHECK(spec_error(Json::parse(R"({"family":"wp_counterexample","grid":64})")).find("/params/alpha") != std::string::npos);
  CHECK(spec_error(Json::parse(R"({"family":"rotation","params":{"beta":"x"},"grid":64})")).find("/params/beta") !=
        std::string::npos);
  CHECK(spec_error(Json::parse(R"({"family":"identity","grid":64,"extra":1})")).find("/extra") != std::string::npos);
  CHECK(spec_error(Json::parse(R"({"family":"samples","params":{"lift":[0,1,1,2,3,4,5,6]}})")).find("increasing") !=
        std::string::npos);
  CHECK(spec_error(Json::parse(R"({"family":"mobius","params":{"a_re":1.5},"grid":64})")) != "");
  CHECK(spec_error(Json::parse(R"({"family":"identity","grid":100})")) != "");
  CHECK(spec_error(Json::parse(R"({"family":"identity","grid":64})")) == "");
  for (const std::string& e : {spec_error(Json::parse(R"({"family":"nope","grid":8})"))})
    CHECK(e.find("wpc --help") != std::string::npos);
  CHECK_THROWS_AS(parse_json_argument("{not json"), SpecError);
  CHECK_THROWS_AS(parse_json_argument("@/nonexistent/spec.json"), SpecError);
}

TEST_CASE("specs from files") {
  const std::string path = "wpc_io_test_spec.json";
  {
    std::ofstream f(path);
    f << R"({"family":"rotation","params":{"beta":0.5},"grid":16})";
  }
  const CircleMap h = map_from_json(parse_json_argument("@" + path));
  CHECK(h.family() == "rotation");
  CHECK(h.size() == 16);
  std::remove(path.c_str());
}

TEST_CASE("report values") {
  CHECK(number(1.5) == 1.5);
  CHECK(number(std::numeric_limits<Real>::infinity()) == "inf");
  CHECK(number(-std::numeric_limits<Real>::infinity()) == "-inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(exact(2.0)["exact"] == true);
  DyadicProfile p;
  p.push(4, 1.0);
  p.push(8, 1.5);
  const Json m = measured(1.5, p, Trend::kYes);
  CHECK(m["value"] == 1.5);
  CHECK(m["profile"]["levels"] == Json::parse("[4,8]"));
  CHECK(m["trend"] == "yes-trend");
  OperatorMatrix op;
  op.matrix = ComplexMatrix::Identity(2, 2) * Complex(0, 1);
  op.label = "custom";
  const Json mj = matrix_json(op);
  CHECK(mj["im"][1][1] == 1.0);
  CHECK(mj["re"][0][1] == 0.0);
}

TEST_CASE("property: power series round-trip bit for bit") {
  Gen g(31);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexVector c(g.integer(1, 40));
    for (Eigen::Index n = 0; n < c.size(); ++n) c[n] = Complex(g.uniform(-3, 3), g.uniform(-3, 3));
    const auto domain = trial % 2 ? PowerSeries::Domain::kExterior : PowerSeries::Domain::kDisk;
    const Json j = series_to_json(PowerSeries(c, domain));
    CHECK(j["truncation"] == c.size() - 1);
    const PowerSeries back = series_from_json(Json::parse(j.dump()));
    CHECK(back.domain() == domain);
    REQUIRE(back.truncation() == c.size() - 1);
    for (Eigen::Index n = 0; n < c.size(); ++n) CHECK(back[n] == c[n]);
  }
  CHECK_THROWS_AS(series_from_json(Json::parse(R"({"domain":"annulus","coefficients":[[0,0]]})")), SpecError);
  CHECK_THROWS_AS(series_from_json(Json::parse(R"({"truncation":3,"coefficients":[[0,0]]})")), SpecError);
  CHECK_THROWS_AS(series_from_json(Json::parse(R"({"coefficients":[[0]]})")), SpecError);
}

TEST_CASE("CSV tables") {
  OperatorMatrix op;
  op.matrix = ComplexMatrix::Zero(2, 3);
  op.matrix(1, 2) = Complex(0.5, -2);
  std::istringstream lines(matrix_csv(op));
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "row,col,re,im");
  CHECK(rows[6] == "1,2,0.5,-2");

  OscillationProfile p;
  p.scales = {0.5, 0.25};
  p.worst_oscillation = {1, 2};
  p.at_zero = {0.5, 1.5};
  CHECK(oscillation_csv(p) == "scale,worst_oscillation,at_zero\n0.5,1,0.5\n0.25,2,1.5\n");
}
