#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgc/metpoly.hpp"

using namespace sgc;

namespace {

Edge ev(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Even}; }
Edge od(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Odd}; }

SignedGraph odd_k22() { return SignedGraph(2, {ev("e", 0, 1), od("o", 0, 1)}); }

SignedGraph odd_k32() {
  return SignedGraph(3, {ev("e01", 0, 1), od("o01", 0, 1), ev("e02", 0, 2), od("o02", 0, 2),
                         ev("e12", 1, 2), od("o12", 1, 2)});
}

SignedGraph odd_k4() {
  return SignedGraph(4, {od("a", 0, 1), od("b", 0, 2), od("c", 0, 3), od("d", 1, 2),
                         od("e", 1, 3), od("f", 2, 3)});
}

MetricVector uniform(const SignedGraph& g, double v) {
  MetricVector x;
  for (const auto& e : g.edges()) x[e.id] = v;
  return x;
}

}  // namespace

TEST_CASE("weight conversions round-trip") {
  EdgeWeights c{{"a", -0.5}, {"b", 1.0}, {"c", 0.25}};
  auto x = to_metric(c);
  CHECK(x["a"] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(x["b"] == doctest::Approx(0.0));
  auto back = to_cosines(x);
  for (auto& [id, v] : c) CHECK(back[id] == doctest::Approx(v).epsilon(1e-12));
  CHECK_THROWS(to_metric(EdgeWeights{{"a", 1.5}}));
}

TEST_CASE("val formula") {
  SignedGraph tri(3, {od("a", 0, 1), od("b", 1, 2), od("c", 0, 2)});
  CHECK(val(tri, uniform(tri, 2.0 / 3.0), {"a", "b", "c"}) == doctest::Approx(1.0));

  SignedGraph path(3, {ev("a", 0, 1), ev("b", 1, 2)});
  CHECK(val(path, {{"a", 0.2}, {"b", 0.3}}, {"a", "b"}) == doctest::Approx(0.5));

  CHECK(val(odd_k22(), {{"e", 0.6}, {"o", 0.5}}, {"e", "o"}) == doctest::Approx(1.1));
  CHECK_THROWS(val(path, {{"a", 0.2}, {"b", 0.3}}, {"zz"}));
}

TEST_CASE("lambda values in both modes") {
  MetricVector x{{"e", 0.6}, {"o", 0.5}};
  for (auto mode : {PathMode::Walk, PathMode::Path}) {
    CHECK(lambda_even(odd_k22(), x, 0, 1, mode) == doctest::Approx(0.6));
    CHECK(lambda_odd(odd_k22(), x, 0, 1, mode) == doctest::Approx(0.5));
  }

  SignedGraph path(3, {ev("a", 0, 1), ev("b", 1, 2)});
  MetricVector px{{"a", 0.2}, {"b", 0.3}};
  CHECK(lambda_even(path, px, 0, 2) == doctest::Approx(0.5));
  CHECK(lambda_odd(path, px, 0, 2) == kInf);

  // 5-vertex 2-connected non-bipartite: modes agree on all pairs
  SignedGraph g(5, {od("a", 0, 1), ev("b", 1, 2), ev("c", 2, 3), ev("d", 3, 4), ev("e", 4, 0),
                    od("f", 1, 3), ev("h", 2, 4)});
  MetricVector gx{{"a", 0.31}, {"b", 0.12}, {"c", 0.55}, {"d", 0.4},
                  {"e", 0.23}, {"f", 0.61}, {"h", 0.09}};
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v)
      for (auto p : {Parity::Even, Parity::Odd}) {
        double w = lambda_value(g, gx, u, v, p, PathMode::Walk);
        double s = lambda_value(g, gx, u, v, p, PathMode::Path);
        if (std::isinf(w))
          CHECK(std::isinf(s));
        else
          CHECK(w == doctest::Approx(s).epsilon(1e-12));
      }
}

TEST_CASE("met_membership") {
  SignedGraph even_g(3, {ev("a", 0, 1), ev("b", 1, 2)});
  auto r0 = met_membership(even_g, {{"a", 0.9}, {"b", 0.1}});
  CHECK(r0.inside);
  CHECK(std::isinf(r0.margin));
  CHECK(r0.witness.empty());

  auto r1 = met_membership(odd_k4(), uniform(odd_k4(), 2.0 / 3.0));
  CHECK(r1.inside);
  CHECK(r1.margin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r1.witness.size() == 3);
  CHECK(val(odd_k4(), uniform(odd_k4(), 2.0 / 3.0), r1.witness) == doctest::Approx(1.0));

  auto r2 = met_membership(odd_k22(), {{"e", 0.3}, {"o", 0.5}});
  CHECK(!r2.inside);
  CHECK(r2.margin == doctest::Approx(-0.2));
  CHECK(r2.witness.size() == 2);
}

TEST_CASE("membership margin is resigning invariant") {
  auto g = odd_k4();
  MetricVector x{{"a", 0.7}, {"b", 0.65}, {"c", 0.7}, {"d", 0.72}, {"e", 0.66}, {"f", 0.68}};
  std::set<int> s{0, 2};
  auto m1 = met_membership(g, x);
  auto m2 = met_membership(resign(g, s), resign_metric(g, x, s));
  CHECK(m1.inside == m2.inside);
  CHECK(m1.margin == doctest::Approx(m2.margin).epsilon(1e-12));
}

TEST_CASE("tight and degenerate flags") {
  SignedGraph tri(3, {od("a", 0, 1), od("b", 1, 2), od("c", 0, 2)});
  auto f1 = tight_flags(tri, uniform(tri, 2.0 / 3.0));
  for (auto& [id, f] : f1) {
    CHECK(f.tight);
    CHECK(f.strictly_tight);
    CHECK(!f.degenerate);
  }

  auto f2 = tight_flags(odd_k22(), uniform(odd_k22(), 0.5));
  for (auto& [id, f] : f2) {
    CHECK(f.tight);
    CHECK(!f.strictly_tight);
  }

  auto f3 = tight_flags(odd_k32(), uniform(odd_k32(), 0.5));
  for (auto& [id, f] : f3) {
    CHECK(f.tight);
    CHECK(!f.strictly_tight);
  }

  SignedGraph pe(2, {ev("a", 0, 1)});
  auto f4 = tight_flags(pe, {{"a", 0.0}});
  CHECK(f4["a"].degenerate);
  CHECK(!f4["a"].tight);

  CHECK_THROWS(tight_flags(odd_k22(), {{"e", 0.3}, {"o", 0.5}}));
}

TEST_CASE("odd cycle enumeration") {
  auto cl = enumerate_odd_cycles(odd_k32());
  CHECK(cl.complete);
  // 3 parallel 2-cycles plus the 4 triangles with an odd number of odd edges
  CHECK(cl.cycles.size() == 7);
  for (const auto& c : cl.cycles) {
    int odd = 0;
    for (const auto& id : c) odd += odd_k32().edge(id).parity == Parity::Odd ? 1 : 0;
    CHECK(odd % 2 == 1);
  }
  auto capped = enumerate_odd_cycles(odd_k32(), 3);
  CHECK(!capped.complete);
  CHECK(capped.cycles.size() == 3);
}

TEST_CASE("push_to_tight") {
  auto r1 = push_to_tight(odd_k22(), {{"e", 0.6}, {"o", 0.5}});
  CHECK(r1["e"] == doctest::Approx(0.55));
  CHECK(r1["o"] == doctest::Approx(0.55));

  auto already = uniform(odd_k22(), 0.5);
  auto r2 = push_to_tight(odd_k22(), already);
  CHECK(r2["e"] == doctest::Approx(0.5));
  CHECK(r2["o"] == doctest::Approx(0.5));

  SignedGraph k32 = odd_k32();
  MetricVector x3;
  for (const auto& e : k32.edges()) x3[e.id] = e.parity == Parity::Odd ? 0.4 : 0.7;
  auto r3 = push_to_tight(k32, x3);
  for (auto& [id, v] : r3) CHECK(v == doctest::Approx(0.55));

  // invariant: output is a member and every edge is tight or degenerate
  auto check_all_tight = [](const SignedGraph& g, const MetricVector& r) {
    CHECK(met_membership(g, r).inside);
    for (auto& [id, f] : tight_flags(g, r)) CHECK((f.tight || f.degenerate));
  };
  check_all_tight(odd_k22(), r1);
  check_all_tight(odd_k32(), r3);
}

TEST_CASE("lambda pair lower bound inside MET") {
  auto g = odd_k4();
  auto x = uniform(g, 2.0 / 3.0);
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      double le = lambda_even(g, x, u, v), lo = lambda_odd(g, x, u, v);
      CHECK(le + lo >= 1.0 - 1e-9);
    }
}
