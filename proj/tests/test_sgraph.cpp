#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgc/sgraph.hpp"

using namespace sgc;

namespace {

Edge ev(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Even}; }
Edge od(EdgeId id, int u, int v) { return {std::move(id), u, v, Parity::Odd}; }

SignedGraph odd_k4() {
  // all edges odd: every triangle has odd parity
  return SignedGraph(4, {od("a", 0, 1), od("b", 0, 2), od("c", 0, 3), od("d", 1, 2),
                         od("e", 1, 3), od("f", 2, 3)});
}

SignedGraph odd_k32() {
  return SignedGraph(3, {ev("e01", 0, 1), od("o01", 0, 1), ev("e02", 0, 2), od("o02", 0, 2),
                         ev("e12", 1, 2), od("o12", 1, 2)});
}

// two odd 2-cycles hung between vertices 0 and 1 through vertices 2 and 3
SignedGraph split_example() {
  return SignedGraph(4, {ev("p", 0, 2), od("q", 0, 2), ev("r", 2, 1), ev("s", 0, 3),
                         ev("t", 3, 1), od("u", 3, 1)});
}

}  // namespace

TEST_CASE("construction drops loops and validates") {
  SignedGraph g(3, {ev("a", 0, 1), ev("loop", 2, 2), od("b", 1, 2)});
  CHECK(g.edge_count() == 2);
  CHECK(g.find_edge("loop") == nullptr);
  CHECK_THROWS(SignedGraph(2, {ev("a", 0, 1), ev("a", 1, 0)}));
  CHECK_THROWS(SignedGraph(2, {ev("a", 0, 5)}));
}

TEST_CASE("resign flips cut edges and is an involution") {
  SignedGraph g(3, {ev("a", 0, 1), od("b", 1, 2), ev("c", 0, 2)});
  SignedGraph h = resign(g, {1});
  CHECK(h.edge("a").parity == Parity::Odd);
  CHECK(h.edge("b").parity == Parity::Even);
  CHECK(h.edge("c").parity == Parity::Even);
  SignedGraph back = resign(h, {1});
  for (const auto& e : g.edges()) CHECK(back.edge(e.id).parity == e.parity);
  // cycle parity is invariant
  CHECK(resign_canonical_form(h) == resign_canonical_form(g));
}

TEST_CASE("contract_even merges endpoints and deletes new loops") {
  SignedGraph g(3, {ev("a", 0, 1), od("b", 1, 2), ev("c", 0, 1)});
  auto r = contract_even(g, "a");
  CHECK(r.graph.vertex_count() == 2);
  CHECK(r.vertex_map[0] == r.vertex_map[1]);
  CHECK(r.graph.find_edge("c") == nullptr);  // became a loop
  CHECK(r.graph.edge("b").parity == Parity::Odd);
  CHECK_THROWS(contract_even(g, "b"));   // odd
  CHECK_THROWS(contract_even(g, "zz"));  // missing
}

TEST_CASE("is_bipartite finds resign set or odd cycle") {
  // 4-cycle with two odd edges: balanced
  SignedGraph g(4, {od("a", 0, 1), ev("b", 1, 2), od("c", 2, 3), ev("d", 3, 0)});
  auto r = is_bipartite(g);
  REQUIRE(r.bipartite);
  SignedGraph h = resign(g, r.resign_set);
  for (const auto& e : h.edges()) CHECK(e.parity == Parity::Even);

  SignedGraph t(3, {ev("a", 0, 1), ev("b", 1, 2), od("c", 0, 2)});
  auto rt = is_bipartite(t);
  REQUIRE(!rt.bipartite);
  int odd = 0;
  for (const auto& id : rt.odd_cycle) odd += t.edge(id).parity == Parity::Odd ? 1 : 0;
  CHECK(odd % 2 == 1);
  CHECK(rt.odd_cycle.size() >= 2);
}

TEST_CASE("cut vertices and 2-connectivity") {
  SignedGraph bowtie(5, {ev("a", 0, 1), ev("b", 1, 2), od("c", 0, 2), ev("d", 2, 3),
                         ev("e", 3, 4), od("f", 2, 4)});
  auto cv = find_cut_vertex(bowtie);
  REQUIRE(cv.has_value());
  CHECK(*cv == 2);
  CHECK(!bowtie.two_connected());

  SignedGraph tri(3, {ev("a", 0, 1), ev("b", 1, 2), od("c", 0, 2)});
  CHECK(!find_cut_vertex(tri).has_value());
  CHECK(tri.two_connected());
}

TEST_CASE("strong 2-split detection") {
  auto sp = find_strong_2_split(split_example());
  REQUIRE(sp.has_value());
  CHECK(std::min(sp->u, sp->v) == 0);
  CHECK(std::max(sp->u, sp->v) == 1);
  CHECK(sp->side1.size() == 3);
  CHECK(sp->side2.size() == 3);

  // odd-K3^2 has neither a cut vertex nor a strong 2-split
  CHECK(!find_cut_vertex(odd_k32()).has_value());
  CHECK(!find_strong_2_split(odd_k32()).has_value());
}

TEST_CASE("minor detection") {
  CHECK(has_minor(odd_k4(), MinorPattern::OddK4));
  // contracting odd-K4 to 3 vertices leaves only 5 edges, too few for odd-K3^2
  CHECK(!has_minor(odd_k4(), MinorPattern::OddK32));
  CHECK(has_minor(odd_k32(), MinorPattern::OddK32));
  // odd-K3^2 with a subdivided even edge
  SignedGraph k32sub(4, {ev("e1", 0, 3), ev("e2", 3, 1), od("o01", 0, 1), ev("e02", 0, 2),
                         od("o02", 0, 2), ev("e12", 1, 2), od("o12", 1, 2)});
  CHECK(has_minor(k32sub, MinorPattern::OddK32));
  CHECK(!has_minor(k32sub, MinorPattern::OddK4));
  CHECK(!has_minor(odd_k32(), MinorPattern::OddK4));

  // all-even K4 is balanced, no odd minors at all
  SignedGraph even_k4(4, {ev("a", 0, 1), ev("b", 0, 2), ev("c", 0, 3), ev("d", 1, 2),
                          ev("e", 1, 3), ev("f", 2, 3)});
  CHECK(!has_minor(even_k4, MinorPattern::OddK4));
  CHECK(!has_minor(even_k4, MinorPattern::OddK32));

  // subdivided odd-K4 still has the minor
  SignedGraph sub(5, {od("a1", 0, 4), ev("a2", 4, 1), od("b", 0, 2), od("c", 0, 3),
                      od("d", 1, 2), od("e", 1, 3), od("f", 2, 3)});
  CHECK(has_minor(sub, MinorPattern::OddK4));

  CHECK(!has_minor(split_example(), MinorPattern::OddK4));
  CHECK(!has_minor(split_example(), MinorPattern::OddK32));
}

TEST_CASE("decompose classifies pieces") {
  auto leaf = decompose(odd_k32());
  CHECK(leaf->kind == DecompositionNode::Kind::LeafOddK32);
  CHECK(leaf->children.empty());

  SignedGraph tri(3, {ev("a", 0, 1), ev("b", 1, 2), od("c", 0, 2)});
  CHECK(decompose(tri)->kind == DecompositionNode::Kind::LeafK32Free);

  SignedGraph bowtie(5, {ev("a", 0, 1), ev("b", 1, 2), od("c", 0, 2), ev("d", 2, 3),
                         ev("e", 3, 4), od("f", 2, 4)});
  auto cut = decompose(bowtie);
  CHECK(cut->kind == DecompositionNode::Kind::CutJoin);
  REQUIRE(cut->children.size() == 2);
  for (const auto& ch : cut->children) {
    CHECK(ch->kind == DecompositionNode::Kind::LeafK32Free);
    CHECK(ch->piece.vertex_count() == 3);
    // vertex_map sends the child's cut vertex copy back to vertex 2
    bool found = false;
    for (int w : ch->vertex_map) found = found || w == 2;
    CHECK(found);
  }

  auto split = decompose(split_example());
  CHECK(split->kind == DecompositionNode::Kind::SplitJoin);
  REQUIRE(split->children.size() == 2);
  for (const auto& ch : split->children) {
    CHECK(ch->kind == DecompositionNode::Kind::LeafK32Free);
    CHECK(ch->piece.vertex_count() == 3);
    CHECK(ch->piece.edge_count() == 5);  // 3 real + 2 virtual
    CHECK(ch->piece.find_edge(split->virtual_even_id) != nullptr);
    CHECK(ch->piece.find_edge(split->virtual_odd_id) != nullptr);
  }

  CHECK_THROWS(decompose(odd_k4()));  // not odd-K4 minor free
}
