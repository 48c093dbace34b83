#include "sgc/tightstruct.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace sgc {

TightCycleSet enumerate_tight_cycles(const SignedGraph& g, const MetricVector& x, double tol,
                                     int cap) {
  TightCycleSet result;
  std::set<std::vector<EdgeId>> seen;
  auto adj = g.adjacency();
  std::vector<char> visited(g.vertex_count(), 0);
  std::vector<int> path_edges;

  std::function<void(int, int, int, double)> rec = [&](int s, int at, int parity, double acc) {
    visited[at] = 1;
    for (auto [w, ei] : adj[at]) {
      if (!path_edges.empty() && ei == path_edges.back()) continue;
      const Edge& e = g.edges()[ei];
      double nacc = acc + edge_contribution(e, x);
      if (nacc > 1.0 + tol) continue;  // contributions are nonnegative
      int np = parity ^ (e.parity == Parity::Odd ? 1 : 0);
      if (w == s) {
        if (path_edges.empty() || np != 1) continue;
        std::vector<EdgeId> cyc;
        for (int pe : path_edges) cyc.push_back(g.edges()[pe].id);
        cyc.push_back(e.id);
        std::sort(cyc.begin(), cyc.end());
        if (seen.insert(cyc).second) {
          result.cycles.push_back(cyc);
          if (static_cast<int>(result.cycles.size()) > cap)
            throw std::runtime_error("enumerate_tight_cycles: cap exceeded");
        }
        continue;
      }
      if (w < s || visited[w]) continue;
      path_edges.push_back(ei);
      rec(s, w, np, nacc);
      path_edges.pop_back();
    }
    visited[at] = 0;
  };
  for (int s = 0; s < g.vertex_count(); ++s) rec(s, s, 0, 0.0);
  return result;
}

Hypergraph build_hypergraph(const SignedGraph& g, const TightCycleSet& cycles) {
  Hypergraph h;
  h.n = g.vertex_count();
  std::vector<std::set<int>> sets;
  for (const auto& cyc : cycles.cycles) {
    std::set<int> vs;
    for (const auto& id : cyc) {
      const Edge& e = g.edge(id);
      vs.insert(e.u);
      vs.insert(e.v);
    }
    sets.push_back(std::move(vs));
  }
  // merge to fixpoint
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < sets.size() && !changed; ++i) {
      for (size_t j = i + 1; j < sets.size() && !changed; ++j) {
        int common = 0;
        for (int v : sets[j])
          if (sets[i].count(v) && ++common >= 2) break;
        if (common >= 2) {
          sets[i].insert(sets[j].begin(), sets[j].end());
          sets.erase(sets.begin() + j);
          changed = true;
        }
      }
    }
  }
  std::set<std::set<int>> dedup(sets.begin(), sets.end());
  h.edges.assign(dedup.begin(), dedup.end());
  return h;
}

HypergraphClass classify_hypergraph(const Hypergraph& h) {
  if (h.n == 1) return HypergraphClass::SingleVertex;
  for (const auto& e : h.edges)
    if (static_cast<int>(e.size()) == h.n) return HypergraphClass::SpanningHyperedge;
  if (h.edges.size() == 3) {
    std::set<int> covered, corners;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      covered.insert(h.edges[i].begin(), h.edges[i].end());
      for (int j = i + 1; j < 3 && ok; ++j) {
        std::vector<int> inter;
        std::set_intersection(h.edges[i].begin(), h.edges[i].end(), h.edges[j].begin(),
                              h.edges[j].end(), std::back_inserter(inter));
        if (inter.size() != 1)
          ok = false;
        else
          corners.insert(inter[0]);
      }
    }
    // three distinct corner vertices: the incidence graph is a 6-cycle,
    // not three parts glued at one point
    if (ok && corners.size() == 3 && static_cast<int>(covered.size()) == h.n)
      return HypergraphClass::Triangle;
  }
  return HypergraphClass::Other;
}

HypergraphStructure hypergraph_structure(const Hypergraph& h) {
  HypergraphStructure s;
  const int m = static_cast<int>(h.edges.size());
  std::map<int, std::vector<int>> touch;  // vertex -> hyperedge indices
  for (int i = 0; i < m; ++i)
    for (int v : h.edges[i]) touch[v].push_back(i);

  // component count + forest check of the incidence graph
  int incidences = 0, touched = static_cast<int>(touch.size());
  for (auto& [v, es] : touch) incidences += static_cast<int>(es.size());
  std::vector<int> comp(m, -1);
  int ncomp = 0;
  for (int i = 0; i < m; ++i) {
    if (comp[i] != -1) continue;
    std::queue<int> q;
    q.push(i);
    comp[i] = ncomp;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (int v : h.edges[a])
        for (int b : touch[v])
          if (comp[b] == -1) {
            comp[b] = ncomp;
            q.push(b);
          }
    }
    ++ncomp;
  }
  // forest: nodes = touched vertices + hyperedges, edges = incidences
  s.acyclic = incidences == touched + m - ncomp;
  s.components = ncomp + (h.n - touched);

  for (auto& [v, es] : touch) {
    if (es.size() < 2) continue;
    s.cut_vertices.push_back(v);
    // components of the incidence graph after removing v, restricted to the
    // hyperedges containing v
    std::vector<int> part(m, -1);
    int np = 0;
    for (int i = 0; i < m; ++i) {
      if (part[i] != -1) continue;
      std::queue<int> q;
      q.push(i);
      part[i] = np;
      while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (int w : h.edges[a]) {
          if (w == v) continue;
          for (int b : touch[w])
            if (part[b] == -1) {
              part[b] = np;
              q.push(b);
            }
        }
      }
      ++np;
    }
    std::map<int, Hypergraph> frs;
    for (int ei : es) {
      auto& f = frs[part[ei]];
      f.n = h.n;
      f.edges.push_back(h.edges[ei]);
    }
    for (auto& [p, f] : frs) {
      // pull in hyperedges connected to this branch but not containing v
      for (int i = 0; i < m; ++i)
        if (part[i] == p && !h.edges[i].count(v) &&
            std::find(es.begin(), es.end(), i) == es.end())
          f.edges.push_back(h.edges[i]);
      s.fractions[v].push_back(f);
    }
  }
  return s;
}

ReducedInstance degenerate_reduce(const SignedGraph& g, const EdgeWeights& c, double tol) {
  ReducedInstance r{g, c, {}, {}};
  r.vertex_map.resize(g.vertex_count());
  for (int i = 0; i < g.vertex_count(); ++i) r.vertex_map[i] = i;
  r.sign.assign(g.vertex_count(), 1.0);
  for (const auto& e : g.edges())
    if (!c.count(e.id)) throw std::invalid_argument("missing weight for edge " + e.id);

  auto x_of = [&](const Edge& e) { return std::acos(std::clamp(r.c.at(e.id), -1.0, 1.0)) / M_PI; };

  for (;;) {
    // pick the degenerate edge with the smallest id, for determinism
    const Edge* pick = nullptr;
    for (const auto& e : r.graph.edges()) {
      double x = x_of(e);
      bool deg = e.parity == Parity::Odd ? (x >= 1.0 - tol) : (x <= tol);
      if (deg && (!pick || e.id < pick->id)) pick = &e;
    }
    if (!pick) break;
    EdgeId id = pick->id;
    if (pick->parity == Parity::Odd) {
      // resign one endpoint so the edge becomes even with c = 1
      int u = pick->u;
      r.graph = resign(r.graph, {u});
      for (const auto& f : r.graph.edges())
        if (f.u == u || f.v == u) r.c[f.id] = -r.c.at(f.id);
      for (int v = 0; v < g.vertex_count(); ++v)
        if (r.vertex_map[v] == u) r.sign[v] = -r.sign[v];
    }
    auto res = contract_even(r.graph, id);
    r.c.erase(id);
    for (int v = 0; v < g.vertex_count(); ++v) r.vertex_map[v] = res.vertex_map[r.vertex_map[v]];
    // weights of edges lost as loops disappear too
    EdgeWeights kept;
    for (const auto& f : res.graph.edges()) kept[f.id] = r.c.at(f.id);
    r.c = std::move(kept);
    r.graph = std::move(res.graph);
  }
  return r;
}

}  // namespace sgc
