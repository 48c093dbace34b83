#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgc/classify.hpp"
#include "sgc/oracle.hpp"

using namespace sgc;
using Class = UniquenessVerdict::Class;

namespace {

Edge ev(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Even}; }
Edge od(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Odd}; }

SignedGraph odd_triangle() { return SignedGraph(3, {od("a", 0, 1), od("b", 1, 2), od("c", 0, 2)}); }

SignedGraph odd_k32() {
  return SignedGraph(3, {ev("e01", 0, 1), od("o01", 0, 1), ev("e02", 0, 2), od("o02", 0, 2),
                         ev("e12", 1, 2), od("o12", 1, 2)});
}

EdgeWeights uniform_c(const SignedGraph& g, double v) {
  EdgeWeights c;
  for (const auto& e : g.edges()) c[e.id] = v;
  return c;
}

double residual(const SignedGraph& g, const EdgeWeights& c, const Eigen::MatrixXd& x) {
  double r = 0.0;
  for (int i = 0; i < x.rows(); ++i) r = std::max(r, std::abs(x(i, i) - 1.0));
  for (const auto& e : g.edges())
    r = std::max(r, -sign_of(e.parity) * (x(e.u, e.v) - c.at(e.id)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
  return std::max(r, -es.eigenvalues().minCoeff());
}

}  // namespace

TEST_CASE("classify_unique base classes") {
  // contracted point
  SignedGraph pt(2, {ev("e", 0, 1)});
  CHECK(classify_unique(pt, uniform_c(pt, 1.0)).cls == Class::UniqueRank1);

  // one spanning tight cycle
  SignedGraph tri = odd_triangle();
  auto vt = classify_unique(tri, uniform_c(tri, -0.5));
  CHECK(vt.cls == Class::UniqueRank2);
  REQUIRE(vt.hypergraph.edges.size() == 1);
  CHECK(vt.hypergraph.edges[0].size() == 3);
  CHECK_FALSE(uniqueness_oracle(tri, uniform_c(tri, -0.5)).found_two);

  // doubled triangle at right angles forces the identity
  SignedGraph k32 = odd_k32();
  auto vk = classify_unique(k32, uniform_c(k32, 0.0));
  CHECK(vk.cls == Class::UniqueRank3);
  CHECK_FALSE(uniqueness_oracle(k32, uniform_c(k32, 0.0)).found_two);

  // violated odd 2-cycle
  SignedGraph bad(2, {ev("e", 0, 1), od("o", 0, 1)});
  EdgeWeights cb{{"e", 0.9}, {"o", -0.9}};
  CHECK(classify_unique(bad, cb).cls == Class::Infeasible);
}

TEST_CASE("classify_unique not unique carries a witness") {
  SignedGraph g(2, {ev("e", 0, 1)});
  EdgeWeights c{{"e", 0.5}};
  auto v = classify_unique(g, c);
  CHECK(v.cls == Class::NotUnique);
  REQUIRE(v.witness.has_value());
  CHECK(residual(g, c, *v.witness) <= 1e-7);
  SolveResult sr = solve(g, c);
  CHECK((sr.low_rank.gram() - *v.witness).cwiseAbs().maxCoeff() > 1e-6);

  SignedGraph tri = odd_triangle();
  auto vt = classify_unique(tri, uniform_c(tri, -0.4));
  CHECK(vt.cls == Class::NotUnique);
  REQUIRE(vt.witness.has_value());
  CHECK(residual(tri, uniform_c(tri, -0.4), *vt.witness) <= 1e-7);
}

TEST_CASE("classify_rigidity") {
  SignedGraph tri = odd_triangle();
  Eigen::MatrixXd p(2, 3);
  for (int i = 0; i < 3; ++i)
    p.col(i) << std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3);
  CHECK(classify_rigidity({tri, p}).cls == Class::UniqueRank2);

  SignedGraph cable(2, {ev("e", 0, 1)});
  Eigen::MatrixXd q(2, 2);
  q.col(0) << 1, 0;
  q.col(1) << 0.5, std::sqrt(3.0) / 2;
  CHECK(classify_rigidity({cable, q}).cls == Class::NotUnique);

  CHECK(classify_rigidity({odd_k32(), Eigen::MatrixXd::Identity(3, 3)}).cls ==
        Class::UniqueRank3);

  Eigen::MatrixXd bad = q;
  bad.col(0) *= 2.0;
  CHECK_THROWS(classify_rigidity({cable, bad}));
}

TEST_CASE("super_stable_check") {
  SignedGraph tri = odd_triangle();
  Eigen::MatrixXd p(2, 3);
  for (int i = 0; i < 3; ++i)
    p.col(i) << std::cos(2 * M_PI * i / 3), std::sin(2 * M_PI * i / 3);

  DualCertificate ones;
  ones.vertex_omega = {0.5, 0.5, 0.5};
  ones.edge_omega = {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}};  // matrix is all 1/2, rank 1
  auto r = super_stable_check({tri, p}, ones);
  CHECK(r.super_stable);

  DualCertificate zero;
  zero.vertex_omega = {0.0, 0.0, 0.0};
  auto rz = super_stable_check({tri, p}, zero);
  CHECK_FALSE(rz.super_stable);
  CHECK(rz.reason == "corank");

  SignedGraph cable(2, {ev("e", 0, 1)});
  Eigen::MatrixXd q(2, 2);
  q.col(0) << 1, 0;
  q.col(1) << 0.5, std::sqrt(3.0) / 2;
  DualCertificate z2;
  z2.vertex_omega = {0.0, 0.0};
  CHECK_FALSE(super_stable_check({cable, q}, z2).super_stable);
}

TEST_CASE("rigidity matches super stability through the solver dual") {
  for (auto kind : {InstanceKind::K32Free, InstanceKind::WithK32Leaves, InstanceKind::WithSplits})
    for (std::uint64_t seed = 40; seed < 44; ++seed) {
      auto gi = generate_instance(seed, 5, kind);
      bool degenerate = false;
      for (const auto& [id, w] : gi.c)
        if (std::abs(std::abs(w) - 1.0) < 1e-9) degenerate = true;
      if (degenerate) continue;
      SolveResult sr = solve(gi.graph, gi.c);
      REQUIRE(sr.status == SolveResult::Status::Solved);
      Tensegrity t{gi.graph, sr.max_rank.P};
      auto verdict = classify_rigidity(t);
      bool unique = verdict.cls == Class::UniqueRank1 || verdict.cls == Class::UniqueRank2 ||
                    verdict.cls == Class::UniqueRank3;
      auto ss = super_stable_check(t, sr.dual);
      CAPTURE(seed);
      CAPTURE(static_cast<int>(kind));
      CHECK(unique == ss.super_stable);
      if (!unique) {
        REQUIRE(verdict.witness.has_value());
        CHECK(residual(gi.graph, gi.c, *verdict.witness) <= 1e-6);
      }
    }
}

TEST_CASE("classify agrees with the uniqueness oracle on small instances") {
  for (std::uint64_t seed = 60; seed < 72; ++seed) {
    auto gi = generate_instance(seed, 4, InstanceKind::K32Free);
    bool degenerate = false;
    for (const auto& [id, w] : gi.c)
      if (std::abs(std::abs(w) - 1.0) < 1e-9) degenerate = true;
    if (degenerate) continue;
    auto v = classify_unique(gi.graph, gi.c);
    auto ur = uniqueness_oracle(gi.graph, gi.c, 32, seed);
    CAPTURE(seed);
    bool unique = v.cls != Class::NotUnique && v.cls != Class::Infeasible;
    if (unique) CHECK_FALSE(ur.found_two);
    if (v.cls == Class::NotUnique) CHECK(v.witness.has_value());
  }
}
