#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgc/oracle.hpp"
#include "sgc/sgraph.hpp"

using namespace sgc;

namespace {

Edge ev(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Even}; }
Edge od(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Odd}; }

SignedGraph odd_k4() {
  return SignedGraph(4, {od("a", 0, 1), od("b", 0, 2), od("c", 0, 3), od("d", 1, 2),
                         od("e", 1, 3), od("f", 2, 3)});
}

EdgeWeights uniform_c(const SignedGraph& g, double v) {
  EdgeWeights c;
  for (const auto& e : g.edges()) c[e.id] = v;
  return c;
}

}  // namespace

TEST_CASE("met_oracle basics") {
  SignedGraph k4 = odd_k4();
  MetricVector x;
  for (const auto& e : k4.edges()) x[e.id] = 2.0 / 3.0;
  CHECK(met_oracle(k4, x));

  SignedGraph k22(2, {ev("e", 0, 1), od("o", 0, 1)});
  CHECK(!met_oracle(k22, {{"e", 0.3}, {"o", 0.5}}));

  SignedGraph path(3, {ev("a", 0, 1), ev("b", 1, 2)});
  CHECK(met_oracle(path, {{"a", 0.9}, {"b", 0.05}}));
}

TEST_CASE("feasibility_oracle") {
  SignedGraph tri(3, {od("a", 0, 1), od("b", 1, 2), od("c", 0, 2)});
  auto r1 = feasibility_oracle(tri, uniform_c(tri, -0.5));
  CHECK(r1.found);
  CHECK(r1.best_residual <= 1e-9);
  for (int i = 0; i < 3; ++i) CHECK(r1.X(i, i) == doctest::Approx(1.0).epsilon(1e-9));

  // infeasible: 0 <= |sum p_i|^2 = 4 + 2 sum of products forces a product > -1/2
  auto r2 = feasibility_oracle(odd_k4(), uniform_c(odd_k4(), -0.5), -1, 16, 3000);
  CHECK(!r2.found);
  CHECK(r2.best_residual >= 0.01);

  SignedGraph one(2, {ev("a", 0, 1)});
  auto r3 = feasibility_oracle(one, {{"a", 0.5}});
  CHECK(r3.found);
  CHECK(r3.X(0, 1) >= 0.5 - 1e-9);
}

TEST_CASE("uniqueness_oracle") {
  SignedGraph one(2, {ev("a", 0, 1)});
  auto r1 = uniqueness_oracle(one, {{"a", 0.5}}, 16, 7);
  CHECK(r1.found_two);
  CHECK((r1.X1 - r1.X2).cwiseAbs().maxCoeff() > 1e-6);

  SignedGraph tri(3, {od("a", 0, 1), od("b", 1, 2), od("c", 0, 2)});
  auto r2 = uniqueness_oracle(tri, uniform_c(tri, -0.5), 8, 7);
  CHECK(!r2.found_two);

  SignedGraph k32(3, {ev("e01", 0, 1), od("o01", 0, 1), ev("e02", 0, 2), od("o02", 0, 2),
                      ev("e12", 1, 2), od("o12", 1, 2)});
  auto r3 = uniqueness_oracle(k32, uniform_c(k32, 0.0), 8, 7);
  CHECK(!r3.found_two);
}

TEST_CASE("generate_instance") {
  auto inst = generate_instance(1, 5, InstanceKind::K32Free);
  CHECK(inst.graph.vertex_count() >= 5);
  if (inst.graph.edge_count() <= kMinorEdgeLimit)
    CHECK(!has_minor(inst.graph, MinorPattern::OddK4));
  auto x = to_metric(inst.c);
  CHECK(met_membership(inst.graph, x).inside);
  CHECK(met_oracle(inst.graph, x));

  auto split = generate_instance(3, 8, InstanceKind::WithSplits);
  auto root = decompose(split.graph);
  bool has_split = false;
  std::function<void(const DecompositionNode*)> walk = [&](const DecompositionNode* nd) {
    if (nd->kind == DecompositionNode::Kind::SplitJoin) has_split = true;
    for (const auto& ch : nd->children) walk(ch.get());
  };
  walk(root.get());
  CHECK(has_split);

  // dual-oracle agreement across kinds and seeds
  for (auto kind : {InstanceKind::K32Free, InstanceKind::WithK32Leaves, InstanceKind::WithSplits})
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
      auto gi = generate_instance(seed, 6, kind);
      auto gx = to_metric(gi.c);
      CHECK(met_oracle(gi.graph, gx) == met_membership(gi.graph, gx).inside);
    }
}
