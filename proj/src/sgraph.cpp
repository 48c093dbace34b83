#include "sgc/sgraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace sgc {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

SignedGraph::SignedGraph(int vertex_count, std::vector<Edge> edges) : n_(vertex_count) {
  if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
  std::unordered_set<std::string> seen;
  for (auto& e : edges) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw std::out_of_range("edge endpoint out of range: " + e.id);
    if (!seen.insert(e.id).second) throw std::invalid_argument("duplicate edge id: " + e.id);
    if (e.u == e.v) continue;  // loops are deleted
    edges_.push_back(std::move(e));
  }
}

const Edge* SignedGraph::find_edge(const EdgeId& id) const {
  for (const auto& e : edges_)
    if (e.id == id) return &e;
  return nullptr;
}

const Edge& SignedGraph::edge(const EdgeId& id) const {
  const Edge* e = find_edge(id);
  if (!e) throw std::invalid_argument("no such edge: " + id);
  return *e;
}

std::vector<std::vector<std::pair<int, int>>> SignedGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(n_);
  for (int i = 0; i < edge_count(); ++i) {
    adj[edges_[i].u].push_back({edges_[i].v, i});
    adj[edges_[i].v].push_back({edges_[i].u, i});
  }
  return adj;
}

bool SignedGraph::connected() const {
  if (n_ <= 1) return true;
  auto adj = adjacency();
  std::vector<char> seen(n_, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [w, ei] : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == n_;
}

bool SignedGraph::two_connected() const {
  return connected() && !find_cut_vertex(*this).has_value();
}

SignedGraph resign(const SignedGraph& g, const std::set<int>& s) {
  for (int v : s)
    if (v < 0 || v >= g.vertex_count()) throw std::out_of_range("resign: vertex out of range");
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) {
    bool cu = s.count(e.u) > 0, cv = s.count(e.v) > 0;
    if (cu != cv) e.parity = (e.parity == Parity::Odd) ? Parity::Even : Parity::Odd;
  }
  return SignedGraph(g.vertex_count(), std::move(edges));
}

ContractionResult contract_even(const SignedGraph& g, const EdgeId& id) {
  const Edge& e = g.edge(id);
  if (e.parity != Parity::Even)
    throw std::invalid_argument("contract_even: edge is odd (resign first): " + id);
  int a = std::min(e.u, e.v), b = std::max(e.u, e.v);
  std::vector<int> vmap(g.vertex_count());
  int next = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (v == b)
      vmap[v] = -1;  // fill below
    else
      vmap[v] = next++;
  }
  vmap[b] = vmap[a];
  std::vector<Edge> edges;
  for (const auto& f : g.edges()) {
    if (f.id == id) continue;
    Edge nf = f;
    nf.u = vmap[f.u];
    nf.v = vmap[f.v];
    if (nf.u == nf.v) continue;  // loop
    edges.push_back(std::move(nf));
  }
  return {SignedGraph(g.vertex_count() - 1, std::move(edges)), std::move(vmap)};
}

BipartiteResult is_bipartite(const SignedGraph& g) {
  const int n = g.vertex_count();
  auto adj = g.adjacency();
  std::vector<int> color(n, -1);    // 0/1 = resign side
  std::vector<int> par_edge(n, -1); // BFS tree edge index
  std::vector<int> par(n, -1);
  for (int s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto [w, ei] : adj[v]) {
        const Edge& e = g.edges()[ei];
        int want = color[v] ^ (e.parity == Parity::Odd ? 1 : 0);
        if (color[w] == -1) {
          color[w] = want;
          par[w] = v;
          par_edge[w] = ei;
          q.push(w);
        } else if (color[w] != want) {
          // odd cycle: edge (v,w) closes it; walk tree paths to the root-most
          // common ancestor
          std::vector<int> pv, pw;
          std::vector<char> on_v(n, 0);
          for (int x = v; x != -1; x = par[x]) on_v[x] = 1;
          int meet = w;
          while (!on_v[meet]) meet = par[meet];
          BipartiteResult r;
          r.bipartite = false;
          r.odd_cycle.push_back(g.edges()[ei].id);
          for (int x = v; x != meet; x = par[x]) r.odd_cycle.push_back(g.edges()[par_edge[x]].id);
          std::vector<EdgeId> tail;
          for (int x = w; x != meet; x = par[x]) tail.push_back(g.edges()[par_edge[x]].id);
          std::reverse(tail.begin(), tail.end());
          for (auto& t : tail) r.odd_cycle.push_back(t);
          return r;
        }
      }
    }
  }
  BipartiteResult r;
  r.bipartite = true;
  for (int v = 0; v < n; ++v)
    if (color[v] == 1) r.resign_set.insert(v);
  return r;
}

namespace {

// Edge groups hanging at a vertex set S: edges are merged when they share an
// endpoint outside S. Returns group index per edge (-1 for edges inside S).
std::vector<int> edge_groups(const SignedGraph& g, const std::set<int>& s,
                             int* group_count) {
  const int m = g.edge_count();
  UnionFind uf(m);
  std::map<int, int> rep;  // outside vertex -> representative edge
  for (int i = 0; i < m; ++i) {
    const Edge& e = g.edges()[i];
    for (int w : {e.u, e.v}) {
      if (s.count(w)) continue;
      auto it = rep.find(w);
      if (it == rep.end())
        rep[w] = i;
      else
        uf.unite(i, it->second);
    }
  }
  std::vector<int> gid(m, -1);
  std::map<int, int> relabel;
  for (int i = 0; i < m; ++i) {
    const Edge& e = g.edges()[i];
    if (s.count(e.u) && s.count(e.v)) {
      gid[i] = -2;  // assigned per-edge below
      continue;
    }
    int r = uf.find(i);
    auto it = relabel.find(r);
    if (it == relabel.end()) {
      int k = static_cast<int>(relabel.size());
      relabel[r] = k;
      gid[i] = k;
    } else {
      gid[i] = it->second;
    }
  }
  int k = static_cast<int>(relabel.size());
  for (int i = 0; i < m; ++i)
    if (gid[i] == -2) gid[i] = k++;
  *group_count = k;
  return gid;
}

}  // namespace

std::optional<int> find_cut_vertex(const SignedGraph& g) {
  if (g.vertex_count() < 3) return std::nullopt;
  for (int v = 0; v < g.vertex_count(); ++v) {
    int k = 0;
    auto gid = edge_groups(g, {v}, &k);
    // groups not touching v do not count as hanging at v
    int hanging = 0;
    std::vector<char> touches(k, 0);
    for (int i = 0; i < g.edge_count(); ++i) {
      const Edge& e = g.edges()[i];
      if (e.u == v || e.v == v) touches[gid[i]] = 1;
    }
    for (int i = 0; i < k; ++i) hanging += touches[i];
    if (g.connected() && hanging >= 2) return v;
  }
  return std::nullopt;
}

namespace {

SignedGraph subgraph_of(const SignedGraph& g, const std::vector<EdgeId>& ids,
                        std::vector<int>* vmap_out) {
  std::map<int, int> vmap;
  std::vector<Edge> edges;
  for (const auto& id : ids) {
    const Edge& e = g.edge(id);
    for (int w : {e.u, e.v})
      if (!vmap.count(w)) {
        int k = static_cast<int>(vmap.size());
        vmap[w] = k;
      }
    edges.push_back({e.id, vmap[e.u], vmap[e.v], e.parity});
  }
  if (vmap_out) {
    vmap_out->assign(vmap.size(), -1);
    for (auto [orig, local] : vmap) (*vmap_out)[local] = orig;
  }
  return SignedGraph(static_cast<int>(vmap.size()), std::move(edges));
}

}  // namespace

std::optional<Strong2Split> find_strong_2_split(const SignedGraph& g) {
  const int n = g.vertex_count();
  if (n < 4 || !g.connected()) return std::nullopt;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      int k = 0;
      auto gid = edge_groups(g, {u, v}, &k);
      if (k < 2 || k > 16) continue;
      // try every bipartition of groups
      for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
        std::vector<EdgeId> e1, e2;
        for (int i = 0; i < g.edge_count(); ++i) {
          if (mask & (1u << gid[i]))
            e1.push_back(g.edges()[i].id);
          else
            e2.push_back(g.edges()[i].id);
        }
        bool ok = true;
        for (const auto* side : {&e1, &e2}) {
          std::set<int> verts;
          for (const auto& id : *side) {
            const Edge& e = g.edge(id);
            verts.insert(e.u);
            verts.insert(e.v);
          }
          if (verts.size() < 3 || !verts.count(u) || !verts.count(v)) {
            ok = false;
            break;
          }
          SignedGraph sub = subgraph_of(g, *side, nullptr);
          if (!sub.connected() || is_bipartite(sub).bipartite) {
            ok = false;
            break;
          }
        }
        if (ok) return Strong2Split{std::move(e1), std::move(e2), u, v};
      }
    }
  }
  return std::nullopt;
}

std::string resign_canonical_form(const SignedGraph& g) {
  // normalize parity by resigning a BFS spanning forest to all-even
  const int n = g.vertex_count();
  auto adj = g.adjacency();
  std::vector<int> color(n, -1);
  for (int s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto [w, ei] : adj[v]) {
        if (color[w] != -1) continue;
        color[w] = color[v] ^ (g.edges()[ei].parity == Parity::Odd ? 1 : 0);
        q.push(w);
      }
    }
  }
  std::vector<std::tuple<int, int, int>> rows;
  for (const auto& e : g.edges()) {
    int p = (e.parity == Parity::Odd ? 1 : 0) ^ color[e.u] ^ color[e.v];
    rows.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v), p);
  }
  std::sort(rows.begin(), rows.end());
  std::ostringstream os;
  os << n << ':';
  for (auto [a, b, p] : rows) os << a << ',' << b << ',' << p << ';';
  return os.str();
}

namespace {

// Keep at most one even and one odd edge per vertex pair and drop isolated
// vertices; sound for minor testing.
SignedGraph minor_simplify(const SignedGraph& g) {
  std::set<std::tuple<int, int, int>> kept;
  std::vector<Edge> edges;
  std::map<int, int> vmap;
  for (const auto& e : g.edges()) {
    int a = std::min(e.u, e.v), b = std::max(e.u, e.v);
    int p = e.parity == Parity::Odd ? 1 : 0;
    if (!kept.insert({a, b, p}).second) continue;
    for (int w : {a, b})
      if (!vmap.count(w)) {
        int k = static_cast<int>(vmap.size());
        vmap[w] = k;
      }
    edges.push_back({e.id, vmap[a], vmap[b], e.parity});
  }
  return SignedGraph(static_cast<int>(vmap.size()), std::move(edges));
}

bool matches_odd_k4(const SignedGraph& g) {
  if (g.vertex_count() != 4 || g.edge_count() != 6) return false;
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : g.edges()) pairs.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
  if (pairs.size() != 6) return false;
  // all four triangles odd (cycle parity is resigning invariant)
  auto parity_of = [&](int a, int b) {
    for (const auto& e : g.edges())
      if ((e.u == a && e.v == b) || (e.u == b && e.v == a))
        return e.parity == Parity::Odd ? 1 : 0;
    return 0;
  };
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = b + 1; c < 4; ++c)
        if ((parity_of(a, b) ^ parity_of(b, c) ^ parity_of(a, c)) == 0) return false;
  return true;
}

bool matches_odd_k32(const SignedGraph& g) {
  if (g.vertex_count() != 3 || g.edge_count() != 6) return false;
  // each pair joined by exactly one even and one odd edge
  std::map<std::pair<int, int>, std::pair<int, int>> count;  // pair -> (even, odd)
  for (const auto& e : g.edges()) {
    auto key = std::make_pair(std::min(e.u, e.v), std::max(e.u, e.v));
    if (e.parity == Parity::Odd)
      count[key].second++;
    else
      count[key].first++;
  }
  if (count.size() != 3) return false;
  for (auto& [k, c] : count)
    if (c.first != 1 || c.second != 1) return false;
  return true;
}

struct MinorSearch {
  MinorPattern pattern;
  std::unordered_set<std::string> failed;

  bool run(const SignedGraph& raw) {
    SignedGraph g = minor_simplify(raw);
    const int pn = pattern == MinorPattern::OddK4 ? 4 : 3;
    if (g.vertex_count() < pn || g.edge_count() < 6) return false;
    if (pattern == MinorPattern::OddK4 ? matches_odd_k4(g) : matches_odd_k32(g)) return true;
    if (is_bipartite(g).bipartite) return false;  // both patterns are non-bipartite
    std::string key = resign_canonical_form(g);
    if (failed.count(key)) return false;
    for (int i = 0; i < g.edge_count(); ++i) {
      // contraction (resign first if odd)
      SignedGraph h = g;
      if (g.edges()[i].parity == Parity::Odd) h = resign(g, {g.edges()[i].u});
      if (run(contract_even(h, g.edges()[i].id).graph)) return true;
      // deletion
      std::vector<Edge> rest;
      for (int j = 0; j < g.edge_count(); ++j)
        if (j != i) rest.push_back(g.edges()[j]);
      if (run(SignedGraph(g.vertex_count(), std::move(rest)))) return true;
    }
    failed.insert(std::move(key));
    return false;
  }
};

}  // namespace

bool has_minor(const SignedGraph& g, MinorPattern pattern) {
  if (minor_simplify(g).edge_count() > kMinorEdgeLimit)
    throw std::runtime_error("has_minor: size limit exceeded (use decompose)");
  MinorSearch s{pattern, {}};
  return s.run(g);
}

namespace {

bool is_odd_k32_leaf(const SignedGraph& g) { return matches_odd_k32(minor_simplify(g)); }

std::unique_ptr<DecompositionNode> decompose_rec(const SignedGraph& g, int* virt_counter) {
  auto node = std::make_unique<DecompositionNode>();
  node->piece = g;
  if (auto cv = find_cut_vertex(g)) {
    node->kind = DecompositionNode::Kind::CutJoin;
    node->cut_vertex = *cv;
    int k = 0;
    auto gid = edge_groups(g, {*cv}, &k);
    std::vector<std::vector<EdgeId>> groups(k);
    for (int i = 0; i < g.edge_count(); ++i) groups[gid[i]].push_back(g.edges()[i].id);
    for (auto& grp : groups) {
      if (grp.empty()) continue;
      std::vector<int> vmap;
      SignedGraph sub = subgraph_of(g, grp, &vmap);
      auto child = decompose_rec(sub, virt_counter);
      child->vertex_map = std::move(vmap);
      node->children.push_back(std::move(child));
    }
    return node;
  }
  if (auto sp = find_strong_2_split(g)) {
    node->kind = DecompositionNode::Kind::SplitJoin;
    node->split_u = sp->u;
    node->split_v = sp->v;
    int tag = (*virt_counter)++;
    node->virtual_even_id = "__virt_e_" + std::to_string(tag);
    node->virtual_odd_id = "__virt_o_" + std::to_string(tag);
    for (const auto* side : {&sp->side1, &sp->side2}) {
      std::vector<int> vmap;
      SignedGraph sub = subgraph_of(g, *side, &vmap);
      // local indices of u and v in the part
      int lu = -1, lv = -1;
      for (int i = 0; i < static_cast<int>(vmap.size()); ++i) {
        if (vmap[i] == sp->u) lu = i;
        if (vmap[i] == sp->v) lv = i;
      }
      std::vector<Edge> edges = sub.edges();
      edges.push_back({node->virtual_even_id, lu, lv, Parity::Even});
      edges.push_back({node->virtual_odd_id, lu, lv, Parity::Odd});
      SignedGraph part(sub.vertex_count(), std::move(edges));
      auto child = decompose_rec(part, virt_counter);
      child->vertex_map = std::move(vmap);
      node->children.push_back(std::move(child));
    }
    return node;
  }
  if (is_odd_k32_leaf(g)) {
    node->kind = DecompositionNode::Kind::LeafOddK32;
    return node;
  }
  if (g.edge_count() <= kMinorEdgeLimit &&
      (has_minor(g, MinorPattern::OddK32) || has_minor(g, MinorPattern::OddK4)))
    throw std::runtime_error(
        "decompose: piece is not classifiable; input was not odd-K4 minor free");
  node->kind = DecompositionNode::Kind::LeafK32Free;
  return node;
}

}  // namespace

std::unique_ptr<DecompositionNode> decompose(const SignedGraph& g) {
  if (!g.connected()) throw std::invalid_argument("decompose: graph must be connected");
  int counter = 0;
  auto root = decompose_rec(g, &counter);
  root->vertex_map.resize(g.vertex_count());
  std::iota(root->vertex_map.begin(), root->vertex_map.end(), 0);
  return root;
}

}  // namespace sgc
