#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgc/instance_io.hpp"

using namespace sgc;

TEST_CASE("parse a c-weighted instance") {
  auto f = parse_instance(R"({
    "n": 3,
    "edges": [
      {"id": "a", "u": 0, "v": 1, "sign": "odd", "c": -0.5},
      {"id": "b", "u": 1, "v": 2, "sign": "even", "c": 0.25}
    ]
  })");
  CHECK(f.graph.vertex_count() == 3);
  CHECK(f.graph.edge_count() == 2);
  CHECK_FALSE(f.given_as_x);
  CHECK(f.c.at("a") == -0.5);
  CHECK(f.x.at("a") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(f.graph.edge("b").parity == Parity::Even);
  CHECK_FALSE(f.config.has_value());
}

TEST_CASE("parse x weights and config") {
  double s = 0.8660254037844387;
  std::string text = R"({
    "n": 2,
    "edges": [{"id": "e", "u": 0, "v": 1, "sign": "even", "x": 0.25}],
    "config": {"p": [[1.0, 0.5], [0.0, 0.8660254037844387]]}
  })";
  auto f = parse_instance(text);
  CHECK(f.given_as_x);
  CHECK(f.x.at("e") == 0.25);
  CHECK(f.c.at("e") == doctest::Approx(std::cos(M_PI * 0.25)).epsilon(1e-15));
  REQUIRE(f.config.has_value());
  CHECK(f.config->rows() == 2);
  CHECK((*f.config)(1, 1) == doctest::Approx(s));
}

TEST_CASE("round trip is exact") {
  InstanceFile f;
  f.graph = SignedGraph(4, {{"a", 0, 1, Parity::Odd},
                            {"b", 1, 2, Parity::Even},
                            {"c", 2, 3, Parity::Odd}});
  f.c = {{"a", -0.123456789012345}, {"b", 0.3}, {"c", 1.0 / 3.0}};
  for (auto& [id, v] : f.c) f.x[id] = std::acos(v) / M_PI;
  Eigen::MatrixXd p(2, 4);
  for (int i = 0; i < 4; ++i) p.col(i) << std::cos(0.3 * i), std::sin(0.3 * i);
  f.config = p;

  auto g = parse_instance(emit_instance(f));
  CHECK(g.graph.vertex_count() == 4);
  REQUIRE(g.graph.edge_count() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(g.graph.edges()[i].id == f.graph.edges()[i].id);
    CHECK(g.graph.edges()[i].u == f.graph.edges()[i].u);
    CHECK(g.graph.edges()[i].parity == f.graph.edges()[i].parity);
  }
  for (auto& [id, v] : f.c) CHECK(g.c.at(id) == v);  // bit exact
  REQUIRE(g.config.has_value());
  CHECK((*g.config - *f.config).cwiseAbs().maxCoeff() == 0.0);
  CHECK(emit_instance(g) == emit_instance(f));

  // x-given files round trip in x
  f.given_as_x = true;
  auto h = parse_instance(emit_instance(f));
  for (auto& [id, v] : f.x) CHECK(h.x.at(id) == v);
}

TEST_CASE("malformed inputs are rejected") {
  CHECK_THROWS(parse_instance("{"));
  CHECK_THROWS(parse_instance(R"({"n": 2})"));
  CHECK_THROWS(parse_instance(R"({"n": 2, "edges": [{"id":"e","u":0,"v":1,"sign":"even"}]})"));
  CHECK_THROWS(parse_instance(
      R"({"n": 2, "edges": [{"id":"e","u":0,"v":1,"sign":"even","c":0.1,"x":0.5}]})"));
  CHECK_THROWS(parse_instance(
      R"({"n": 2, "edges": [{"id":"e","u":0,"v":2,"sign":"even","c":0.1}]})"));
  CHECK_THROWS(parse_instance(
      R"({"n": 2, "edges": [{"id":"e","u":0,"v":1,"sign":"up","c":0.1}]})"));
  CHECK_THROWS(parse_instance(
      R"({"n": 2, "edges": [{"id":"e","u":0,"v":1,"sign":"odd","c":1.5}]})"));
  // mixed c and x across edges
  CHECK_THROWS(parse_instance(R"({"n": 3, "edges": [
    {"id":"e","u":0,"v":1,"sign":"even","c":0.1},
    {"id":"f","u":1,"v":2,"sign":"even","x":0.5}]})"));
  // non-unit config
  CHECK_THROWS(parse_instance(R"({"n": 2,
    "edges": [{"id":"e","u":0,"v":1,"sign":"even","c":0.1}],
    "config": {"p": [[1.0, 2.0], [0.0, 0.0]]}})"));
}
