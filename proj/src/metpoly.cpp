#include "sgc/metpoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>

namespace sgc {

namespace {

constexpr double kClamp = 1e-12;

double checked_weight(const std::map<EdgeId, double>& m, const EdgeId& id, double lo, double hi) {
  auto it = m.find(id);
  if (it == m.end()) throw std::invalid_argument("missing weight for edge " + id);
  double v = it->second;
  if (v < lo - kClamp || v > hi + kClamp)
    throw std::invalid_argument("weight out of range for edge " + id);
  return std::clamp(v, lo, hi);
}

}  // namespace

MetricVector to_metric(const EdgeWeights& c) {
  MetricVector x;
  for (const auto& [id, v] : c) x[id] = std::acos(checked_weight(c, id, -1.0, 1.0)) / M_PI;
  return x;
}

EdgeWeights to_cosines(const MetricVector& x) {
  EdgeWeights c;
  for (const auto& [id, v] : x) c[id] = std::cos(M_PI * checked_weight(x, id, 0.0, 1.0));
  return c;
}

double edge_contribution(const Edge& e, const MetricVector& x) {
  double xv = checked_weight(x, e.id, 0.0, 1.0);
  return e.parity == Parity::Odd ? 1.0 - xv : xv;
}

double val(const SignedGraph& g, const MetricVector& x, const std::vector<EdgeId>& h) {
  double s = 0;
  for (const auto& id : h) s += edge_contribution(g.edge(id), x);
  return s;
}

MetricVector resign_metric(const SignedGraph& g, const MetricVector& x, const std::set<int>& s) {
  MetricVector out = x;
  for (const auto& e : g.edges()) {
    bool cu = s.count(e.u) > 0, cv = s.count(e.v) > 0;
    if (cu != cv) out[e.id] = 1.0 - checked_weight(x, e.id, 0.0, 1.0);
  }
  return out;
}

EdgeWeights resign_cosines(const SignedGraph& g, const EdgeWeights& c, const std::set<int>& s) {
  EdgeWeights out = c;
  for (const auto& e : g.edges()) {
    bool cu = s.count(e.u) > 0, cv = s.count(e.v) > 0;
    if (cu != cv) out[e.id] = -checked_weight(c, e.id, -1.0, 1.0);
  }
  return out;
}

namespace {

// Dijkstra on the parity double cover; state = 2*vertex + parity-so-far.
// excluded is an edge index to skip (-1 for none). parent[st] = edge index
// entering state st (-1 at sources).
void cover_dijkstra(const SignedGraph& g, const MetricVector& x, int src, int excluded,
                    std::vector<double>* dist, std::vector<int>* parent) {
  const int n = g.vertex_count();
  auto adj = g.adjacency();
  dist->assign(2 * n, kInf);
  parent->assign(2 * n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  (*dist)[2 * src] = 0;
  pq.push({0, 2 * src});
  while (!pq.empty()) {
    auto [d, st] = pq.top();
    pq.pop();
    if (d > (*dist)[st]) continue;
    int v = st / 2, p = st % 2;
    for (auto [w, ei] : adj[v]) {
      if (ei == excluded) continue;
      const Edge& e = g.edges()[ei];
      int np = p ^ (e.parity == Parity::Odd ? 1 : 0);
      double nd = d + edge_contribution(e, x);
      int nst = 2 * w + np;
      if (nd < (*dist)[nst]) {
        (*dist)[nst] = nd;
        (*parent)[nst] = ei;
        pq.push({nd, nst});
      }
    }
  }
}

// min val over simple u-v paths of given parity, avoiding edge `excluded`;
// min_edges lower-bounds the path length. DFS with branch-and-bound.
double simple_path_min(const SignedGraph& g, const MetricVector& x, int u, int v, int parity,
                       int excluded, int min_edges, double prune_above) {
  auto adj = g.adjacency();
  std::vector<char> visited(g.vertex_count(), 0);
  double best = kInf;
  std::function<void(int, int, int, double)> rec = [&](int at, int p, int len, double acc) {
    if (acc >= best || acc > prune_above) return;
    if (at == v) {
      // a simple u-v path never passes through v in the middle
      if (p == parity && len >= min_edges) best = acc;
      return;
    }
    visited[at] = 1;
    for (auto [w, ei] : adj[at]) {
      if (ei == excluded || visited[w]) continue;
      const Edge& e = g.edges()[ei];
      rec(w, p ^ (e.parity == Parity::Odd ? 1 : 0), len + 1, acc + edge_contribution(e, x));
    }
    visited[at] = 0;
  };
  rec(u, 0, 0, 0.0);
  return best;
}

bool use_path_mode(const SignedGraph& g, PathMode mode) {
  if (mode == PathMode::Walk) return false;
  if (mode == PathMode::Path) return true;
  return g.vertex_count() <= 16;
}

}  // namespace

double lambda_value(const SignedGraph& g, const MetricVector& x, int u, int v, Parity parity,
                    PathMode mode) {
  if (u == v) throw std::invalid_argument("lambda: endpoints must differ");
  int p = parity == Parity::Odd ? 1 : 0;
  if (use_path_mode(g, mode)) return simple_path_min(g, x, u, v, p, -1, 1, kInf);
  std::vector<double> dist;
  std::vector<int> parent;
  cover_dijkstra(g, x, u, -1, &dist, &parent);
  return dist[2 * v + p];
}

double lambda_even(const SignedGraph& g, const MetricVector& x, int u, int v, PathMode mode) {
  return lambda_value(g, x, u, v, Parity::Even, mode);
}

double lambda_odd(const SignedGraph& g, const MetricVector& x, int u, int v, PathMode mode) {
  return lambda_value(g, x, u, v, Parity::Odd, mode);
}

namespace {

// Closed odd walk -> simple odd cycle of no larger val, by popping even
// excursions (their val is nonnegative) and stopping at the first odd one.
std::vector<EdgeId> strip_to_odd_cycle(const SignedGraph& g, const std::vector<int>& walk_edges,
                                       int start) {
  std::vector<int> stack_v{start};
  std::vector<int> stack_e;
  int at = start;
  for (int ei : walk_edges) {
    const Edge& e = g.edges()[ei];
    int nxt = e.u == at ? e.v : e.u;
    // does nxt close a cycle with some stack suffix?
    auto it = std::find(stack_v.begin(), stack_v.end(), nxt);
    if (it == stack_v.end()) {
      stack_v.push_back(nxt);
      stack_e.push_back(ei);
      at = nxt;
      continue;
    }
    size_t j = static_cast<size_t>(it - stack_v.begin());
    int odd = g.edges()[ei].parity == Parity::Odd ? 1 : 0;
    std::vector<int> seg{ei};
    for (size_t k = j; k < stack_e.size(); ++k) {
      seg.push_back(stack_e[k]);
      odd ^= g.edges()[stack_e[k]].parity == Parity::Odd ? 1 : 0;
    }
    if (odd) {
      std::vector<EdgeId> out;
      for (int s : seg) out.push_back(g.edges()[s].id);
      return out;
    }
    stack_v.resize(j + 1);
    stack_e.resize(j);
    at = nxt;
  }
  throw std::logic_error("strip_to_odd_cycle: walk was not odd");
}

}  // namespace

MembershipResult met_membership(const SignedGraph& g, const MetricVector& x, double tol) {
  for (const auto& e : g.edges()) checked_weight(x, e.id, 0.0, 1.0);
  MembershipResult best;
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    // cycle through e = e + complementary-parity u-v connection avoiding e
    int want = 1 ^ (e.parity == Parity::Odd ? 1 : 0);
    std::vector<double> dist;
    std::vector<int> parent;
    cover_dijkstra(g, x, e.u, i, &dist, &parent);
    double total = edge_contribution(e, x) + dist[2 * e.v + want];
    if (total - 1.0 < best.margin) {
      best.margin = total - 1.0;
      // reconstruct walk from e.v back to e.u in the cover, then append e
      std::vector<int> walk;
      int st = 2 * e.v + want;
      while (parent[st] != -1) {
        int ei = parent[st];
        walk.push_back(ei);
        const Edge& f = g.edges()[ei];
        int w = st / 2;
        int prev = f.u == w ? f.v : f.u;
        st = 2 * prev + ((st % 2) ^ (f.parity == Parity::Odd ? 1 : 0));
      }
      std::reverse(walk.begin(), walk.end());
      walk.push_back(i);
      best.witness = strip_to_odd_cycle(g, walk, e.u);
    }
  }
  best.inside = best.margin >= -tol;
  return best;
}

namespace {

bool odd_cycle_through(const SignedGraph& g, const MetricVector& x, int edge_idx, int min_len,
                       double tol) {
  const Edge& e = g.edges()[edge_idx];
  int want = 1 ^ (e.parity == Parity::Odd ? 1 : 0);
  double budget = 1.0 + tol - edge_contribution(e, x);
  double d = simple_path_min(g, x, e.u, e.v, want, edge_idx, min_len - 1, budget);
  return d <= budget;
}

}  // namespace

TightFlags tight_flags(const SignedGraph& g, const MetricVector& x, double tol) {
  auto mem = met_membership(g, x, tol);
  if (!mem.inside) throw std::invalid_argument("tight_flags: x is not in MET");
  TightFlags out;
  for (int i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    EdgeFlags f;
    double xv = checked_weight(x, e.id, 0.0, 1.0);
    f.degenerate = e.parity == Parity::Odd ? (xv >= 1.0 - tol) : (xv <= tol);
    f.tight = odd_cycle_through(g, x, i, 2, tol);
    f.strictly_tight = f.tight && odd_cycle_through(g, x, i, 3, tol);
    out[e.id] = f;
  }
  return out;
}

CycleList enumerate_odd_cycles(const SignedGraph& g, int max_cycles) {
  CycleList result;
  std::set<std::vector<EdgeId>> seen;
  auto adj = g.adjacency();
  std::vector<char> visited(g.vertex_count(), 0);
  std::vector<int> path_edges;
  bool capped = false;

  // cycles are rooted at their minimal vertex s; interior vertices are > s
  std::function<void(int, int, int)> rec = [&](int s, int at, int parity) {
    if (capped) return;
    visited[at] = 1;
    for (auto [w, ei] : adj[at]) {
      if (capped) return;
      if (!path_edges.empty() && ei == path_edges.back()) continue;  // no immediate backtrack
      const Edge& e = g.edges()[ei];
      int np = parity ^ (e.parity == Parity::Odd ? 1 : 0);
      if (w == s) {
        if (path_edges.empty()) continue;  // would be a loop
        if (np == 1) {
          std::vector<EdgeId> cyc;
          for (int pe : path_edges) cyc.push_back(g.edges()[pe].id);
          cyc.push_back(e.id);
          std::sort(cyc.begin(), cyc.end());
          if (seen.insert(cyc).second) {
            result.cycles.push_back(cyc);
            if (static_cast<int>(result.cycles.size()) >= max_cycles) capped = true;
          }
        }
        continue;
      }
      if (w < s || visited[w]) continue;
      path_edges.push_back(ei);
      rec(s, w, np);
      path_edges.pop_back();
    }
    visited[at] = 0;
  };
  for (int s = 0; s < g.vertex_count() && !capped; ++s) rec(s, s, 0);
  result.complete = !capped;
  return result;
}

MetricVector push_to_tight(const SignedGraph& g, const MetricVector& x,
                           const std::set<EdgeId>& frozen_in, double tol, int max_cycles) {
  auto start = met_membership(g, x, tol);
  if (!start.inside) throw std::invalid_argument("push_to_tight: x is not in MET");
  auto cl = enumerate_odd_cycles(g, max_cycles);
  MetricVector cur = x;
  std::set<EdgeId> frozen = frozen_in;

  auto apply = [&](double eps, const std::set<EdgeId>& fr) {
    MetricVector nxt = cur;
    for (const auto& e : g.edges()) {
      if (fr.count(e.id)) continue;
      nxt[e.id] = std::clamp(cur[e.id] + (e.parity == Parity::Odd ? eps : -eps), 0.0, 1.0);
    }
    return nxt;
  };

  for (int round = 0; round <= g.edge_count() + 1; ++round) {
    auto flags = tight_flags(g, cur, tol);
    for (const auto& [id, f] : flags)
      if (f.tight || f.degenerate) frozen.insert(id);
    if (static_cast<int>(frozen.size()) >= g.edge_count()) return cur;

    double eps = kInf;
    for (const auto& e : g.edges()) {
      if (frozen.count(e.id)) continue;
      eps = std::min(eps, e.parity == Parity::Odd ? 1.0 - cur[e.id] : cur[e.id]);
    }
    for (const auto& cyc : cl.cycles) {
      int k = 0;
      for (const auto& id : cyc) k += frozen.count(id) ? 0 : 1;
      if (k == 0) continue;
      eps = std::min(eps, (val(g, cur, cyc) - 1.0) / k);
    }
    if (!cl.complete) {
      // cycle list was capped; trust only what membership confirms
      double lo = 0, hi = eps;
      if (!met_membership(g, apply(hi, frozen), tol).inside) {
        for (int it = 0; it < 60; ++it) {
          double mid = (lo + hi) / 2;
          (met_membership(g, apply(mid, frozen), tol).inside ? lo : hi) = mid;
        }
        eps = lo;
      }
    }
    if (eps <= 0) throw std::logic_error("push_to_tight: no progress");
    cur = apply(eps, frozen);
  }
  throw std::logic_error("push_to_tight: did not converge");
}

}  // namespace sgc
