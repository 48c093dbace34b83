#include "sgc/complete.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <queue>

namespace sgc {

namespace {

double x_of(double c) { return std::acos(std::clamp(c, -1.0, 1.0)) / M_PI; }
double contrib_of(bool odd, double c) { return odd ? 1.0 - x_of(c) : x_of(c); }

Eigen::MatrixXd pad_rows(const Eigen::MatrixXd& p, int rows) {
  if (p.rows() >= rows) return p;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(rows, p.cols());
  q.topRows(p.rows()) = p;
  return q;
}

struct OrderedCycle {
  std::vector<int> verts;      // graph vertex ids, verts[i] -- verts[i+1 mod k]
  std::vector<int> edge_idx;   // indices into g.edges()
};

OrderedCycle order_cycle(const SignedGraph& g, const std::vector<EdgeId>& cycle) {
  if (cycle.size() < 2) throw std::invalid_argument("order_cycle: need at least 2 edges");
  std::vector<int> eidx;
  std::map<int, std::vector<int>> inc;  // vertex -> positions in eidx
  for (const auto& id : cycle) {
    const Edge* e = g.find_edge(id);
    if (!e) throw std::invalid_argument("order_cycle: unknown edge " + id);
    int pos = static_cast<int>(eidx.size());
    eidx.push_back(static_cast<int>(e - g.edges().data()));
    inc[e->u].push_back(pos);
    inc[e->v].push_back(pos);
  }
  for (auto& [v, ps] : inc)
    if (ps.size() != 2) throw std::invalid_argument("order_cycle: edge set is not a simple cycle");

  OrderedCycle oc;
  int at = g.edges()[eidx[0]].u;
  int last_pos = -1;
  for (size_t step = 0; step < cycle.size(); ++step) {
    oc.verts.push_back(at);
    int pos = inc[at][0] == last_pos ? inc[at][1] : inc[at][0];
    const Edge& e = g.edges()[eidx[pos]];
    oc.edge_idx.push_back(eidx[pos]);
    at = e.u == at ? e.v : e.u;
    last_pos = pos;
  }
  if (at != oc.verts[0]) throw std::invalid_argument("order_cycle: traversal did not close");
  return oc;
}

struct LocalEdge {
  bool odd = false;
  double c = 0.0;
  long key = 0;  // >= 0: position in the input cycle; < 0: virtual
};

// Places a tight odd triangle on the unit circle. Columns follow the three
// vertices; edge i connects columns i and i+1 mod 3.
Eigen::Matrix<double, 2, 3> realize_triangle(const std::array<LocalEdge, 3>& es, double tol) {
  int odd_count = (es[0].odd ? 1 : 0) + (es[1].odd ? 1 : 0) + (es[2].odd ? 1 : 0);
  if (odd_count % 2 == 0) throw std::invalid_argument("triangle is not odd");
  Eigen::Matrix<double, 2, 3> p;
  double th = 0.0, s = 1.0;
  p.col(0) << 1.0, 0.0;
  for (int i = 0; i < 2; ++i) {
    double a = std::acos(std::clamp(es[i].c, -1.0, 1.0));
    if (es[i].odd) {
      th += M_PI - a;
      s = -s;
    } else {
      th += a;
    }
    p.col(i + 1) << s * std::cos(th), s * std::sin(th);
  }
  double closure = p.col(2).dot(p.col(0)) - es[2].c;
  if (std::abs(closure) > std::max(tol, 1e-12) * 50)
    throw std::invalid_argument("triangle closure failed: cycle not tight");
  return p;
}

struct LocalStress {
  std::map<long, double> edge;  // by key
  std::map<int, double> vertex; // by graph vertex id
};

LocalStress triangle_stress(const std::array<LocalEdge, 3>& es, const std::array<int, 3>& vs,
                            double tol) {
  auto p = realize_triangle(es, tol);
  auto det2 = [&](int i, int j) { return p(0, i) * p(1, j) - p(1, i) * p(0, j); };
  Eigen::Vector3d u(det2(1, 2), -det2(0, 2), det2(0, 1));
  double mx = u.cwiseAbs().maxCoeff();
  if (mx < 1e-12) throw std::logic_error("triangle stress: kernel degenerated");
  u /= mx;
  LocalStress st;
  for (int i = 0; i < 3; ++i) {
    st.vertex[vs[i]] += u(i) * u(i);
    int j = (i + 1) % 3;
    double w = 2.0 * u(i) * u(j);
    double dir = es[i].odd ? 1.0 : -1.0;
    if (w * dir < 1e-12)
      throw std::logic_error("triangle stress: sign pattern violated (degenerate weights?)");
    st.edge[es[i].key] += w;
  }
  return st;
}

LocalStress stress_rec(std::vector<LocalEdge> es, std::vector<int> vs, double tol, long& fresh) {
  const size_t k = es.size();
  if (k == 3) return triangle_stress({es[0], es[1], es[2]}, {vs[0], vs[1], vs[2]}, tol);

  double w = contrib_of(es[0].odd, es[0].c) + contrib_of(es[1].odd, es[1].c);
  if (w <= 1e-12 || w >= 1.0 - 1e-12)
    throw std::invalid_argument("cycle_stress: reduction left no room (degenerate weights?)");
  bool pp_odd = es[0].odd != es[1].odd;
  double ch = pp_odd ? -std::cos(M_PI * w) : std::cos(M_PI * w);

  LocalEdge h{pp_odd, ch, --fresh};
  std::vector<LocalEdge> res;
  res.push_back(h);
  res.insert(res.end(), es.begin() + 2, es.end());
  std::vector<int> rvs;
  rvs.push_back(vs[0]);
  rvs.insert(rvs.end(), vs.begin() + 2, vs.end());
  LocalStress sub = stress_rec(std::move(res), std::move(rvs), tol, fresh);

  // the virtual edge reappears in the completing triangle with flipped parity
  // and the same Gram value, so the two weights have opposite signs
  LocalEdge ht{!pp_odd, ch, h.key};
  LocalStress tri = triangle_stress({es[0], es[1], ht}, {vs[0], vs[1], vs[2]}, tol);
  double t = -sub.edge.at(h.key) / tri.edge.at(h.key);
  if (!(t > 0)) throw std::logic_error("cycle_stress: scaling factor not positive");

  LocalStress out = std::move(sub);
  for (auto& [key, val] : tri.edge) out.edge[key] += t * val;
  for (auto& [v, val] : tri.vertex) out.vertex[v] += t * val;
  if (std::abs(out.edge.at(h.key)) > 1e-8)
    throw std::logic_error("cycle_stress: virtual edge weight did not cancel");
  out.edge.erase(h.key);
  return out;
}

Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& u, int dim) {
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim);
  if (u.cols() > 0) proj -= u * u.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(proj, Eigen::ComputeThinU);
  int keep = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 0.5) ++keep;
  return svd.matrixU().leftCols(keep);
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++r;
  return r;
}

Eigen::MatrixXd compress_rows(const Eigen::MatrixXd& p, double rank_tol) {
  if (p.size() == 0) return p;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(0) > 0 && sv(i) > rank_tol * sv(0)) ++r;
  r = std::max(r, 1);
  return sv.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
}

Completion make_completion(Eigen::MatrixXd p, double rank_tol) {
  Completion c;
  c.P = compress_rows(p, rank_tol);
  c.rank = numerical_rank(c.P, rank_tol);
  return c;
}

Eigen::MatrixXd DualCertificate::matrix(const SignedGraph& g) const {
  const int n = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < std::min<int>(n, vertex_omega.size()); ++i) m(i, i) = vertex_omega[i];
  for (const auto& [id, w] : edge_omega) {
    const Edge& e = g.edge(id);
    m(e.u, e.v) += w / 2.0;
    m(e.v, e.u) += w / 2.0;
  }
  return m;
}

bool DualCertificate::zero(double tol) const {
  for (double v : vertex_omega)
    if (std::abs(v) > tol) return false;
  for (const auto& [id, w] : edge_omega)
    if (std::abs(w) > tol) return false;
  return true;
}

CycleRealization realize_tight_cycle(const SignedGraph& g, const std::vector<EdgeId>& cycle,
                                     const EdgeWeights& c, double tol) {
  OrderedCycle oc = order_cycle(g, cycle);
  const int k = static_cast<int>(cycle.size());
  int odd_count = 0;
  for (int ei : oc.edge_idx)
    if (g.edges()[ei].parity == Parity::Odd) ++odd_count;
  if (odd_count % 2 == 0) throw std::invalid_argument("realize_tight_cycle: cycle is even");

  CycleRealization r;
  r.verts = oc.verts;
  r.P.resize(2, k);
  double th = 0.0, s = 1.0;
  for (int i = 0; i < k; ++i) {
    r.P.col(i) << s * std::cos(th), s * std::sin(th);
    const Edge& e = g.edges()[oc.edge_idx[i]];
    double a = std::acos(std::clamp(c.at(e.id), -1.0, 1.0));
    if (e.parity == Parity::Odd) {
      th += M_PI - a;
      s = -s;
    } else {
      th += a;
    }
  }
  if (std::abs(th - M_PI) > std::max(tol, 1e-12) * 50)
    throw std::invalid_argument("realize_tight_cycle: closure failed, cycle not tight");
  return r;
}

DualCertificate cycle_stress(const SignedGraph& g, const std::vector<EdgeId>& cycle,
                             const EdgeWeights& c, double tol) {
  if (cycle.size() < 3) throw std::invalid_argument("cycle_stress: cycle length must be >= 3");
  OrderedCycle oc = order_cycle(g, cycle);
  std::vector<LocalEdge> es;
  for (size_t i = 0; i < oc.edge_idx.size(); ++i) {
    const Edge& e = g.edges()[oc.edge_idx[i]];
    es.push_back({e.parity == Parity::Odd, c.at(e.id), static_cast<long>(i)});
  }
  long fresh = 0;
  LocalStress st = stress_rec(es, oc.verts, tol, fresh);

  DualCertificate d;
  d.vertex_omega.assign(g.vertex_count(), 0.0);
  for (auto& [v, w] : st.vertex) d.vertex_omega[v] += w;
  for (auto& [key, w] : st.edge) {
    if (key < 0) throw std::logic_error("cycle_stress: virtual edge survived");
    d.edge_omega[g.edges()[oc.edge_idx[key]].id] += w;
  }
  return d;
}

PathReduction path_reduce(const SignedGraph& g, const EdgeWeights& c,
                          const std::vector<EdgeId>& path_edges, int start_vertex,
                          const EdgeId& new_edge_id) {
  if (path_edges.size() < 2) throw std::invalid_argument("path_reduce: need >= 2 edges");
  if (g.find_edge(new_edge_id)) throw std::invalid_argument("path_reduce: edge id in use");

  // walk the path, collecting vertices, angles and flips
  PathReduction pr;
  pr.new_edge = new_edge_id;
  pr.path_vertices.push_back(start_vertex);
  pr.theta.push_back(0.0);
  pr.sgn.push_back(1.0);
  bool odd = false;
  double th = 0.0, s = 1.0;
  int at = start_vertex;
  for (const auto& id : path_edges) {
    const Edge& e = g.edge(id);
    if (e.u != at && e.v != at) throw std::invalid_argument("path_reduce: edges not a path");
    at = e.u == at ? e.v : e.u;
    double a = std::acos(std::clamp(c.at(id), -1.0, 1.0));
    if (e.parity == Parity::Odd) {
      th += M_PI - a;
      s = -s;
      odd = !odd;
    } else {
      th += a;
    }
    pr.path_vertices.push_back(at);
    pr.theta.push_back(th);
    pr.sgn.push_back(s);
  }
  if (th > M_PI + 1e-9) throw std::invalid_argument("path_reduce: angle sum exceeds pi");
  const int u = pr.path_vertices.front(), v = pr.path_vertices.back();
  if (u == v) throw std::invalid_argument("path_reduce: path endpoints coincide");

  std::set<EdgeId> on_path(path_edges.begin(), path_edges.end());
  std::vector<char> interior(g.vertex_count(), 0);
  auto adj = g.adjacency();
  for (size_t i = 1; i + 1 < pr.path_vertices.size(); ++i) {
    int w = pr.path_vertices[i];
    if (interior[w] || w == u || w == v)
      throw std::invalid_argument("path_reduce: path is not simple");
    if (adj[w].size() != 2) throw std::invalid_argument("path_reduce: interior degree != 2");
    interior[w] = 1;
  }

  pr.vertex_map.assign(g.vertex_count(), -1);
  int next = 0;
  for (int w = 0; w < g.vertex_count(); ++w)
    if (!interior[w]) pr.vertex_map[w] = next++;

  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (on_path.count(e.id)) continue;
    edges.push_back({e.id, pr.vertex_map[e.u], pr.vertex_map[e.v], e.parity});
    pr.c[e.id] = c.at(e.id);
  }
  double w_total = std::min(th / M_PI, 1.0);
  edges.push_back({new_edge_id, pr.vertex_map[u], pr.vertex_map[v],
                   odd ? Parity::Odd : Parity::Even});
  pr.c[new_edge_id] = odd ? -std::cos(M_PI * w_total) : std::cos(M_PI * w_total);
  pr.graph = SignedGraph(next, std::move(edges));
  return pr;
}

Eigen::MatrixXd path_lift(const PathReduction& pr, const Eigen::MatrixXd& reduced_p) {
  const int n = static_cast<int>(pr.vertex_map.size());
  const int d = static_cast<int>(reduced_p.rows());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, n);
  for (int v = 0; v < n; ++v)
    if (pr.vertex_map[v] >= 0) p.col(v) = reduced_p.col(pr.vertex_map[v]);

  const int u = pr.path_vertices.front(), v = pr.path_vertices.back();
  const double th_k = pr.theta.back(), s_k = pr.sgn.back();
  Eigen::VectorXd a = p.col(u);
  Eigen::VectorXd qk = s_k * p.col(v);
  if (std::abs(a.dot(qk) - std::cos(th_k)) > 1e-6)
    throw std::logic_error("path_lift: endpoints do not satisfy the reduced edge tightly");
  Eigen::VectorXd w = qk - a.dot(qk) * a;
  double wn = w.norm();
  if (wn < 1e-9) throw std::logic_error("path_lift: endpoint points are parallel");
  w /= wn;
  for (size_t i = 1; i + 1 < pr.path_vertices.size(); ++i)
    p.col(pr.path_vertices[i]) =
        pr.sgn[i] * (std::cos(pr.theta[i]) * a + std::sin(pr.theta[i]) * w);
  return p;
}

namespace {

// Fallback for all-tight instances without a reducible degree-2 path (parallel
// edge bundles): the rank <= 2 solution lies on a circle, so propagate angles
// over a spanning tree, searching the per-edge orientation signs, and verify
// every edge with equality.
Eigen::MatrixXd all_tight_angles(const SignedGraph& g, const EdgeWeights& c) {
  const int n = g.vertex_count();
  auto adj = g.adjacency();
  std::vector<int> order{0}, parent_edge(n, -1), parent(n, -1);
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  for (size_t qi = 0; qi < order.size(); ++qi) {
    int v = order[qi];
    for (auto [w, ei] : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        parent_edge[w] = ei;
        order.push_back(w);
      }
  }
  if (static_cast<int>(order.size()) != n)
    throw std::logic_error("all_tight_angles: graph not connected");
  if (n - 1 > 20) throw std::logic_error("all_tight_angles: instance too large");

  std::vector<double> delta(n, 0.0);
  for (int v = 1; v < n; ++v)
    delta[v] = std::acos(std::clamp(c.at(g.edges()[parent_edge[order[v]]].id), -1.0, 1.0));

  std::vector<double> theta(n, 0.0);
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    for (int i = 1; i < n; ++i) {
      int v = order[i];
      theta[v] = theta[parent[v]] + ((mask >> (i - 1)) & 1 ? delta[i] : -delta[i]);
    }
    bool ok = true;
    for (const auto& e : g.edges())
      if (std::abs(std::cos(theta[e.u] - theta[e.v]) - c.at(e.id)) > 1e-6) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Eigen::MatrixXd p(2, n);
    for (int v = 0; v < n; ++v) p.col(v) << std::cos(theta[v]), std::sin(theta[v]);
    return p;
  }
  throw std::logic_error("all_tight_angles: no circle placement found");
}

}  // namespace

Eigen::MatrixXd solve_all_tight(const SignedGraph& g, const EdgeWeights& c) {
  const int n = g.vertex_count();
  ReducedInstance red = degenerate_reduce(g, c);
  if (red.graph.vertex_count() < n) {
    Eigen::MatrixXd pr = solve_all_tight(red.graph, red.c);
    Eigen::MatrixXd p(pr.rows(), n);
    for (int v = 0; v < n; ++v) p.col(v) = red.sign[v] * pr.col(red.vertex_map[v]);
    return p;
  }

  if (n == 1) {
    Eigen::MatrixXd p(2, 1);
    p << 1.0, 0.0;
    return p;
  }
  if (n == 2) {
    double c0 = g.edges().empty() ? 1.0 : c.at(g.edges()[0].id);
    for (const auto& e : g.edges())
      if (std::abs(c.at(e.id) - c0) > 1e-6)
        throw std::logic_error("solve_all_tight: inconsistent tight 2-cycle weights");
    Eigen::MatrixXd p(2, 2);
    p << 1.0, c0, 0.0, std::sqrt(std::max(0.0, 1.0 - c0 * c0));
    return p;
  }

  auto adj = g.adjacency();
  bool all_deg2 = true;
  for (int v = 0; v < n; ++v)
    if (adj[v].size() != 2) all_deg2 = false;
  if (all_deg2 && g.connected()) {
    std::vector<EdgeId> cycle;
    for (const auto& e : g.edges()) cycle.push_back(e.id);
    CycleRealization r = realize_tight_cycle(g, cycle, c);
    Eigen::MatrixXd p(2, n);
    for (size_t i = 0; i < r.verts.size(); ++i) p.col(r.verts[i]) = r.P.col(i);
    return p;
  }

  // maximal degree-2 threads; any of them lies inside a tight odd cycle
  std::vector<std::pair<int, std::vector<EdgeId>>> threads;  // (start vertex, edges)
  std::vector<char> used(n, 0);
  for (int v = 0; v < n; ++v) {
    if (adj[v].size() != 2 || used[v]) continue;
    // walk both ways from v to the nearest vertices of degree != 2
    auto walk = [&](int dir) {
      std::vector<std::pair<int, int>> seq;  // (edge idx, reached vertex)
      int at = v, last = adj[v][dir].second;
      seq.push_back({last, adj[v][dir].first});
      at = adj[v][dir].first;
      while (adj[at].size() == 2 && at != v) {
        int nxt = adj[at][0].second == last ? 1 : 0;
        last = adj[at][nxt].second;
        seq.push_back({last, adj[at][nxt].first});
        at = adj[at][nxt].first;
      }
      return seq;
    };
    auto left = walk(0), right = walk(1);
    if (!left.empty() && left.back().second == v) continue;  // closed on itself
    std::vector<EdgeId> ids;
    int start = left.back().second;
    for (auto it = left.rbegin(); it != left.rend(); ++it) ids.push_back(g.edges()[it->first].id);
    for (auto& [ei, w] : right) ids.push_back(g.edges()[ei].id);
    int at = start;
    for (const auto& id : ids) {
      const Edge& e = g.edge(id);
      at = e.u == at ? e.v : e.u;
      if (at != start) used[at] = 1;
    }
    if (ids.size() >= 2) threads.push_back({start, std::move(ids)});
  }
  if (threads.empty()) return all_tight_angles(g, c);

  std::string last_error = "no thread worked";
  for (auto& [start, ids] : threads) {
    try {
      EdgeId fresh;
      for (int k = 0;; ++k) {
        fresh = "__r" + std::to_string(k);
        if (!g.find_edge(fresh)) break;
      }
      PathReduction pr = path_reduce(g, c, ids, start, fresh);
      MetricVector x2 = to_metric(pr.c);
      MembershipResult mem = met_membership(pr.graph, x2, 1e-7);
      if (!mem.inside) continue;
      TightFlags fl = tight_flags(pr.graph, x2, 1e-7);
      bool ok = true;
      for (auto& [id, f] : fl)
        if (!f.tight && !f.degenerate) ok = false;
      if (!ok) continue;
      Eigen::MatrixXd sub = solve_all_tight(pr.graph, pr.c);
      return path_lift(pr, sub);
    } catch (const std::exception& ex) {
      last_error = ex.what();
    }
  }
  try {
    return all_tight_angles(g, c);
  } catch (const std::exception&) {
    throw std::logic_error(std::string("solve_all_tight: all reductions failed: ") + last_error);
  }
}

Eigen::MatrixXd rotate_fractions(const Eigen::MatrixXd& p, const Hypergraph& h,
                                 double min_slack) {
  HypergraphStructure st = hypergraph_structure(h);
  if (!st.acyclic) throw std::invalid_argument("rotate_fractions: hypergraph not acyclic");
  const int n = h.n;
  if (p.cols() != n) throw std::invalid_argument("rotate_fractions: size mismatch");
  const int m = static_cast<int>(h.edges.size());

  // group hyperedges into components (they pairwise share at most one vertex)
  std::vector<int> comp(m, -1);
  std::vector<std::vector<int>> comps;
  for (int i = 0; i < m; ++i) {
    if (comp[i] != -1) continue;
    comps.push_back({});
    std::queue<int> q;
    q.push(i);
    comp[i] = static_cast<int>(comps.size()) - 1;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      comps.back().push_back(a);
      for (int b = 0; b < m; ++b) {
        if (comp[b] != -1) continue;
        bool touch = false;
        for (int v : h.edges[b])
          if (h.edges[a].count(v)) touch = true;
        if (touch) {
          comp[b] = comp[a];
          q.push(b);
        }
      }
    }
  }

  std::vector<char> in_hyper(n, 0);
  for (const auto& e : h.edges)
    for (int v : e) in_hyper[v] = 1;
  int iso = 0;
  for (int v = 0; v < n; ++v)
    if (!in_hyper[v]) ++iso;

  int extra = iso + std::max(0, static_cast<int>(comps.size()) - 1) * 2;
  for (const auto& cc : comps) extra += static_cast<int>(cc.size()) - 1;
  const int base = std::max<int>(2, p.rows());
  Eigen::MatrixXd q = pad_rows(p, base + extra);
  int axis = base;
  const double theta = std::min(0.05, std::isfinite(min_slack)
                                          ? min_slack / (4.0 * std::max(1, n))
                                          : 0.05);
  const double ct = std::cos(theta), stn = std::sin(theta);

  auto subtree_rotate = [&](const std::set<int>& verts, int anchor) {
    // rotate the orthogonal-to-anchor component of each point into a new axis
    Eigen::VectorXd a = q.col(anchor);
    Eigen::VectorXd w;
    double best = 0.0;
    for (int v : verts) {
      Eigen::VectorXd r = q.col(v) - a.dot(q.col(v)) * a;
      if (r.norm() > best) {
        best = r.norm();
        w = r;
      }
    }
    if (best < 1e-9) return;  // all points parallel to the anchor, nothing to gain
    w /= w.norm();
    int f = axis++;
    for (int v : verts) {
      double s = w.dot(q.col(v));
      q.col(v) += s * ((ct - 1.0) * w);
      q(f, v) += s * stn;
    }
  };

  for (size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& cc = comps[ci];
    std::set<int> cverts;
    for (int ei : cc) cverts.insert(h.edges[ei].begin(), h.edges[ei].end());
    if (ci > 0) {
      // move the whole component into its own pair of fresh axes
      int fa = axis++, fb = axis++;
      for (int v : cverts) {
        double y0 = q(0, v), y1 = q(1, v);
        q(0, v) = ct * y0;
        q(fa, v) = stn * y0;
        q(1, v) = ct * y1;
        q(fb, v) = stn * y1;
      }
    }
    // BFS tree over the component's hyperedges; rotate each subtree about the
    // vertex shared with its parent
    std::map<int, char> seen;
    std::queue<int> bfs;
    bfs.push(cc[0]);
    seen[cc[0]] = 1;
    while (!bfs.empty()) {
      int a = bfs.front();
      bfs.pop();
      for (int b : cc) {
        if (seen.count(b)) continue;
        int shared = -1;
        for (int v : h.edges[b])
          if (h.edges[a].count(v)) shared = v;
        if (shared < 0) continue;
        seen[b] = 1;
        bfs.push(b);
        // collect the subtree of b (away from a) via reachability without a's side
        std::set<int> sub_edges{b};
        std::queue<int> q2;
        q2.push(b);
        while (!q2.empty()) {
          int x = q2.front();
          q2.pop();
          for (int y : cc) {
            if (sub_edges.count(y) || y == a) continue;
            bool touch = false;
            for (int v : h.edges[y])
              if (v != shared && h.edges[x].count(v)) touch = true;
            if (touch) {
              sub_edges.insert(y);
              q2.push(y);
            }
          }
        }
        std::set<int> sverts;
        for (int ei : sub_edges) sverts.insert(h.edges[ei].begin(), h.edges[ei].end());
        sverts.erase(shared);
        subtree_rotate(sverts, shared);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (in_hyper[v]) continue;
    int f = axis++;
    double nv = q.col(v).norm();
    q.col(v) *= ct;
    q(f, v) = stn * nv;
  }
  return q;
}

namespace {

// glue over explicit column-to-global maps; returns the union vertex list
PartResult glue_impl(const PartResult& a, const std::vector<int>& va, const PartResult& b,
                     const std::vector<int>& vb, std::vector<int>* union_verts) {
  std::map<int, int> ia, ib;
  for (size_t i = 0; i < va.size(); ++i) ia[va[i]] = static_cast<int>(i);
  for (size_t i = 0; i < vb.size(); ++i) ib[vb[i]] = static_cast<int>(i);
  std::vector<int> shared;
  for (int gv : va)
    if (ib.count(gv)) shared.push_back(gv);

  std::vector<int> uv = va;
  for (int gv : vb)
    if (!ia.count(gv)) uv.push_back(gv);
  std::sort(uv.begin(), uv.end());
  std::map<int, int> iu;
  for (size_t i = 0; i < uv.size(); ++i) iu[uv[i]] = static_cast<int>(i);

  auto assemble = [&](const Eigen::MatrixXd& p1, const Eigen::MatrixXd& p2,
                      bool separate) -> Eigen::MatrixXd {
    const int d1 = static_cast<int>(p1.rows()), d2 = static_cast<int>(p2.rows());
    const int s = static_cast<int>(shared.size());
    Eigen::MatrixXd s1(d1, s), s2(d2, s);
    for (int i = 0; i < s; ++i) {
      s1.col(i) = p1.col(ia.at(shared[i]));
      s2.col(i) = p2.col(ib.at(shared[i]));
    }
    if (s > 0 && ((s1.transpose() * s1) - (s2.transpose() * s2)).cwiseAbs().maxCoeff() > 1e-6)
      throw std::logic_error("glue: shared Grams disagree");

    int r = 0;
    Eigen::MatrixXd u1(d1, 0), u2(d2, 0), qrot(0, 0);
    if (s > 0) {
      Eigen::BDCSVD<Eigen::MatrixXd> sv1(s1, Eigen::ComputeThinU);
      Eigen::BDCSVD<Eigen::MatrixXd> sv2(s2, Eigen::ComputeThinU);
      double top = std::max(sv1.singularValues()(0), 1e-300);
      for (int i = 0; i < sv1.singularValues().size(); ++i)
        if (sv1.singularValues()(i) > 1e-7 * top) ++r;
      u1 = sv1.matrixU().leftCols(r);
      u2 = sv2.matrixU().leftCols(r);
      Eigen::MatrixXd a1 = u1.transpose() * s1, a2 = u2.transpose() * s2;
      Eigen::BDCSVD<Eigen::MatrixXd> pro(a1 * a2.transpose(),
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
      qrot = pro.matrixU() * pro.matrixV().transpose();
      if ((qrot * a2 - a1).cwiseAbs().maxCoeff() > 1e-6)
        throw std::logic_error("glue: shared configurations not alignable");
    }

    Eigen::MatrixXd out;
    if (separate) {
      Eigen::MatrixXd w1 = orthonormal_complement(u1, d1);
      Eigen::MatrixXd w2 = orthonormal_complement(u2, d2);
      const int dd = r + static_cast<int>(w1.cols() + w2.cols());
      out = Eigen::MatrixXd::Zero(dd, uv.size());
      for (size_t i = 0; i < va.size(); ++i) {
        out.col(iu.at(va[i])).head(r) = u1.transpose() * p1.col(i);
        out.col(iu.at(va[i])).segment(r, w1.cols()) = w1.transpose() * p1.col(i);
      }
      for (size_t i = 0; i < vb.size(); ++i) {
        if (ia.count(vb[i])) continue;  // shared points taken from part 1
        Eigen::VectorXd col = Eigen::VectorXd::Zero(dd);
        col.head(r) = qrot * (u2.transpose() * p2.col(i));
        col.tail(w2.cols()) = w2.transpose() * p2.col(i);
        out.col(iu.at(vb[i])) = col;
      }
    } else {
      // embed part 2 into part 1's ambient space; rank stays <= max(d1, d2)
      const int dd = std::max(d1, d2);
      Eigen::MatrixXd u1p = pad_rows(u1, dd);
      Eigen::MatrixXd w1x = orthonormal_complement(u1p, dd);
      out = Eigen::MatrixXd::Zero(dd, uv.size());
      for (size_t i = 0; i < va.size(); ++i) out.col(iu.at(va[i])).head(d1) = p1.col(i);
      Eigen::MatrixXd w2 = orthonormal_complement(u2, d2);
      for (size_t i = 0; i < vb.size(); ++i) {
        if (ia.count(vb[i])) continue;
        Eigen::VectorXd col = Eigen::VectorXd::Zero(dd);
        if (r > 0) col += u1p * (qrot * (u2.transpose() * p2.col(i)));
        if (w2.cols() > 0)
          col += w1x.leftCols(w2.cols()) * (w2.transpose() * p2.col(i));
        out.col(iu.at(vb[i])) = col;
      }
    }
    return out;
  };

  PartResult out;
  out.P_max = assemble(a.P_max, b.P_max, true);
  out.P_low = assemble(a.P_low, b.P_low, false);
  out.dual.vertex_omega.assign(uv.size(), 0.0);
  for (size_t i = 0; i < va.size(); ++i)
    out.dual.vertex_omega[iu.at(va[i])] += i < a.dual.vertex_omega.size() ? a.dual.vertex_omega[i] : 0.0;
  for (size_t i = 0; i < vb.size(); ++i)
    out.dual.vertex_omega[iu.at(vb[i])] += i < b.dual.vertex_omega.size() ? b.dual.vertex_omega[i] : 0.0;
  out.dual.edge_omega = a.dual.edge_omega;
  for (const auto& [id, w] : b.dual.edge_omega) out.dual.edge_omega[id] += w;
  for (auto it = out.dual.edge_omega.begin(); it != out.dual.edge_omega.end();)
    it = std::abs(it->second) <= 1e-12 ? out.dual.edge_omega.erase(it) : std::next(it);
  if (union_verts) *union_verts = uv;
  return out;
}

}  // namespace

PartResult glue_certificates(const PartResult& a, const std::vector<int>& map_a,
                             const PartResult& b, const std::vector<int>& map_b, int n) {
  std::vector<int> uv;
  PartResult u = glue_impl(a, map_a, b, map_b, &uv);
  PartResult out;
  out.P_max = Eigen::MatrixXd::Zero(u.P_max.rows(), n);
  out.P_low = Eigen::MatrixXd::Zero(u.P_low.rows(), n);
  out.dual.vertex_omega.assign(n, 0.0);
  out.dual.edge_omega = std::move(u.dual.edge_omega);
  for (size_t i = 0; i < uv.size(); ++i) {
    out.P_max.col(uv[i]) = u.P_max.col(i);
    out.P_low.col(uv[i]) = u.P_low.col(i);
    out.dual.vertex_omega[uv[i]] = u.dual.vertex_omega[i];
  }
  return out;
}

namespace {

void dual_add_scaled(DualCertificate& d, const DualCertificate& s, double t) {
  if (d.vertex_omega.size() < s.vertex_omega.size()) d.vertex_omega.resize(s.vertex_omega.size(), 0.0);
  for (size_t i = 0; i < s.vertex_omega.size(); ++i) d.vertex_omega[i] += t * s.vertex_omega[i];
  for (const auto& [id, w] : s.edge_omega) d.edge_omega[id] += t * w;
}

void dual_scale(DualCertificate& d, double t) {
  for (auto& v : d.vertex_omega) v *= t;
  for (auto& [id, w] : d.edge_omega) w *= t;
}

double virt_weight(const DualCertificate& d, const EdgeId& ve, const EdgeId& vo) {
  double t = 0.0;
  if (auto it = d.edge_omega.find(ve); it != d.edge_omega.end()) t += it->second;
  if (auto it = d.edge_omega.find(vo); it != d.edge_omega.end()) t += it->second;
  return t;
}

}  // namespace

void combine_split_duals(const SignedGraph& g1, const EdgeWeights& c1, DualCertificate& d1,
                         const SignedGraph& g2, const EdgeWeights& c2, DualCertificate& d2,
                         const EdgeId& virt_even, const EdgeId& virt_odd) {
  double t1 = virt_weight(d1, virt_even, virt_odd);
  double t2 = virt_weight(d2, virt_even, virt_odd);
  double total = t1 + t2;

  if (std::abs(total) > 1e-10) {
    auto find_stress = [&](const SignedGraph& g, const EdgeWeights& c,
                           const EdgeId& virt) -> std::optional<DualCertificate> {
      TightCycleSet ts;
      try {
        ts = enumerate_tight_cycles(g, to_metric(c), 1e-7, 5000);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      for (const auto& cyc : ts.cycles) {
        if (cyc.size() < 3) continue;
        if (std::find(cyc.begin(), cyc.end(), virt) == cyc.end()) continue;
        try {
          return cycle_stress(g, cyc, c);
        } catch (const std::exception&) {
        }
      }
      return std::nullopt;
    };

    bool fixed = false;
    for (int side = 1; side <= 2 && !fixed; ++side) {
      for (const EdgeId* virt : {&virt_even, &virt_odd}) {
        auto st = side == 1 ? find_stress(g1, c1, *virt) : find_stress(g2, c2, *virt);
        if (!st) continue;
        double contrib = virt_weight(*st, virt_even, virt_odd);
        if (std::abs(contrib) < 1e-12 || contrib * total > 0) continue;
        dual_add_scaled(side == 1 ? d1 : d2, *st, -total / contrib);
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      // A real edge parallel to the virtual pair at the pinned value occupies
      // the same matrix entry, so the residual can be moved onto it exactly.
      for (int side = 1; side <= 2 && !fixed; ++side) {
        const SignedGraph& g = side == 1 ? g1 : g2;
        const EdgeWeights& c = side == 1 ? c1 : c2;
        DualCertificate& d = side == 1 ? d1 : d2;
        const Edge& ve = g.edge(virt_even);
        for (const auto& e : g.edges()) {
          if (e.id == virt_even || e.id == virt_odd) continue;
          if (!((e.u == ve.u && e.v == ve.v) || (e.u == ve.v && e.v == ve.u))) continue;
          if (std::abs(c.at(e.id) - c.at(virt_even)) > 1e-7) continue;
          bool want_pos = total > 0;
          if ((e.parity == Parity::Odd) != want_pos) continue;
          d.edge_omega[e.id] += total;
          d.edge_omega[virt_even] -= total;  // same matrix entry, net zero
          fixed = true;
          break;
        }
      }
    }
    if (!fixed) {
      if (t1 * t2 < -1e-20) {
        dual_scale(d2, -t1 / t2);
      } else {
        throw std::runtime_error("combine_split_duals: virtual weights cannot cancel");
      }
    }
  }

  double residual = virt_weight(d1, virt_even, virt_odd) + virt_weight(d2, virt_even, virt_odd);
  if (std::abs(residual) > 1e-8)
    throw std::logic_error("combine_split_duals: residual virtual weight");
  for (DualCertificate* d : {&d1, &d2}) {
    d->edge_omega.erase(virt_even);
    d->edge_omega.erase(virt_odd);
  }
}

namespace {

struct Ctx {
  double tol = kTolX;
  int max_cycles = 10000;
};

PartResult solve_k32free_leaf(const SignedGraph& g, const EdgeWeights& c, const Ctx& ctx) {
  PartResult out;
  const int n = g.vertex_count();
  out.dual.vertex_omega.assign(n, 0.0);
  if (n == 1 || g.edge_count() == 0) {
    out.P_low = out.P_max = Eigen::MatrixXd::Zero(1, n);
    out.P_low.setOnes();
    out.P_max = rotate_fractions(out.P_low, Hypergraph{n, {}}, kInf);
    return out;
  }

  MetricVector x = to_metric(c);
  TightCycleSet tcs = enumerate_tight_cycles(g, x, ctx.tol, ctx.max_cycles);
  for (const auto& cyc : tcs.cycles)
    if (cyc.size() >= 3) dual_add_scaled(out.dual, cycle_stress(g, cyc, c), 1.0);

  MetricVector x2 = push_to_tight(g, x, {}, ctx.tol, ctx.max_cycles);
  out.P_low = solve_all_tight(g, to_cosines(x2));

  Hypergraph h = build_hypergraph(g, tcs);
  Eigen::MatrixXd base_gram = out.P_low.transpose() * out.P_low;
  double min_slack = kInf;
  for (const auto& e : g.edges()) {
    double margin = (e.parity == Parity::Odd ? -1.0 : 1.0) *
                    (base_gram(e.u, e.v) - c.at(e.id));
    if (margin > 10 * ctx.tol) min_slack = std::min(min_slack, margin);
  }
  out.P_max = rotate_fractions(out.P_low, h, min_slack);
  return out;
}

PartResult solve_odd_k32_leaf(const SignedGraph& g, const EdgeWeights& c, const Ctx& ctx) {
  if (g.vertex_count() != 3) throw std::logic_error("odd-K3^2 leaf: wrong vertex count");
  PartResult out;
  out.dual.vertex_omega.assign(3, 0.0);
  MetricVector x = to_metric(c);

  auto find_triangle = [&](const TightCycleSet& ts) -> const std::vector<EdgeId>* {
    for (const auto& cyc : ts.cycles)
      if (cyc.size() == 3) return &cyc;
    return nullptr;
  };
  auto place = [&](const CycleRealization& r) {
    Eigen::MatrixXd p(2, 3);
    for (int i = 0; i < 3; ++i) p.col(r.verts[i]) = r.P.col(i);
    return p;
  };

  TightCycleSet tcs = enumerate_tight_cycles(g, x, ctx.tol, ctx.max_cycles);
  if (const auto* tri = find_triangle(tcs)) {
    // a tight triangle pins the whole solution at rank 2
    out.P_low = out.P_max = place(realize_tight_cycle(g, *tri, c));
    out.dual = cycle_stress(g, *tri, c);
    return out;
  }

  MetricVector x2 = push_to_tight(g, x, {}, ctx.tol, ctx.max_cycles);
  TightCycleSet tcs2 = enumerate_tight_cycles(g, x2, 1e-7, ctx.max_cycles);
  const auto* tri2 = find_triangle(tcs2);

  if (!tri2) {
    // all three parallel pairs meet: interior solution, strictly spherical
    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(3, 3);
    for (const auto& e : g.edges()) gram(e.u, e.v) = gram(e.v, e.u) = std::cos(M_PI * x2.at(e.id));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.eigenvalues().minCoeff() < -1e-8)
      throw std::logic_error("odd-K3^2 leaf: interior Gram not PSD");
    out.P_low = out.P_max =
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    return out;
  }

  Eigen::MatrixXd p = pad_rows(place(realize_tight_cycle(g, *tri2, to_cosines(x2))), 3);
  out.P_low = p;

  // some pair has slack on both of its edges; bend one endpoint off the plane
  int bi = -1, bj = -1;
  double slack = 0.0;
  for (int i = 0; i < 3 && bi < 0; ++i)
    for (int j = i + 1; j < 3 && bi < 0; ++j) {
      double lo = kInf;
      bool all = true;
      for (const auto& e : g.edges()) {
        if (!((e.u == i && e.v == j) || (e.u == j && e.v == i))) continue;
        double margin = (e.parity == Parity::Odd ? -1.0 : 1.0) *
                        (p.col(i).dot(p.col(j)) - c.at(e.id));
        if (margin < 1e-7) all = false;
        lo = std::min(lo, margin);
      }
      if (all) {
        bi = i;
        bj = j;
        slack = lo;
      }
    }
  if (bi < 0) throw std::logic_error("odd-K3^2 leaf: no slack pair after push");

  int bk = 3 - bi - bj;
  int rot = bi;
  if (std::abs(p.col(rot).dot(p.col(bk))) > 1.0 - 1e-6) rot = bj;
  if (std::abs(p.col(rot).dot(p.col(bk))) > 1.0 - 1e-6)
    throw std::logic_error("odd-K3^2 leaf: collinear configuration");
  int oth = rot == bi ? bj : bi;

  Eigen::Vector3d a = p.col(bk);
  Eigen::Vector3d w = p.col(rot) - a.dot(p.col(rot)) * a;
  double bn = w.norm();
  w /= bn;
  double phi = 0.5;
  for (int it = 0; it < 60; ++it) {
    double delta = std::abs(bn * (std::cos(phi) - 1.0) * p.col(oth).dot(w));
    if (delta < slack / 2) break;
    phi /= 2;
  }
  Eigen::Vector3d e3 = Eigen::Vector3d::Zero();
  e3(2) = 1.0;
  if (std::abs(w(2)) > 1e-9 || std::abs(a(2)) > 1e-9)
    throw std::logic_error("odd-K3^2 leaf: unexpected out-of-plane base");
  p.col(rot) = a.dot(p.col(rot)) * a + bn * (std::cos(phi) * w + std::sin(phi) * e3);
  out.P_max = p;
  return out;
}

PartResult solve_node(const DecompositionNode* nd, const EdgeWeights& c, const Ctx& ctx);

PartResult solve_join(const DecompositionNode* nd, const EdgeWeights& c, const Ctx& ctx) {
  const int n = nd->piece.vertex_count();
  if (nd->kind == DecompositionNode::Kind::CutJoin) {
    std::optional<PartResult> acc;
    std::vector<int> averts;
    for (const auto& ch : nd->children) {
      EdgeWeights cc;
      for (const auto& e : ch->piece.edges()) cc[e.id] = c.at(e.id);
      PartResult r = solve_node(ch.get(), cc, ctx);
      if (!acc) {
        acc = std::move(r);
        averts = ch->vertex_map;
      } else {
        std::vector<int> uv;
        acc = glue_impl(*acc, averts, r, ch->vertex_map, &uv);
        averts = std::move(uv);
      }
    }
    PartResult whole;
    whole.P_max = Eigen::MatrixXd::Zero(acc->P_max.rows(), n);
    whole.P_low = Eigen::MatrixXd::Zero(acc->P_low.rows(), n);
    whole.dual.vertex_omega.assign(n, 0.0);
    whole.dual.edge_omega = std::move(acc->dual.edge_omega);
    for (size_t i = 0; i < averts.size(); ++i) {
      whole.P_max.col(averts[i]) = acc->P_max.col(i);
      whole.P_low.col(averts[i]) = acc->P_low.col(i);
      whole.dual.vertex_omega[averts[i]] = acc->dual.vertex_omega[i];
    }
    return whole;
  }

  // SplitJoin
  if (nd->children.size() != 2) throw std::logic_error("split node must have two children");
  struct Side {
    const DecompositionNode* node;
    EdgeWeights c;
    double lower = 0.0, upper = 1.0;
  };
  std::vector<Side> sides;
  for (const auto& ch : nd->children) {
    Side s;
    s.node = ch.get();
    for (const auto& e : ch->piece.edges())
      if (e.id != nd->virtual_even_id && e.id != nd->virtual_odd_id) s.c[e.id] = c.at(e.id);
    const Edge& ve = ch->piece.edge(nd->virtual_even_id);
    std::vector<Edge> real;
    for (const auto& e : ch->piece.edges())
      if (e.id != nd->virtual_even_id && e.id != nd->virtual_odd_id) real.push_back(e);
    SignedGraph bare(ch->piece.vertex_count(), real);
    MetricVector xs = to_metric(s.c);
    double le = lambda_even(bare, xs, ve.u, ve.v);
    double lo = lambda_odd(bare, xs, ve.u, ve.v);
    s.upper = std::min(1.0, le);
    s.lower = std::max(0.0, 1.0 - lo);
    sides.push_back(std::move(s));
  }
  double lo = std::max(sides[0].lower, sides[1].lower);
  double hi = std::min(sides[0].upper, sides[1].upper);
  if (lo > hi + 1e-9) throw std::logic_error("split: empty virtual interval on a member");
  double lam = std::clamp((lo + hi) / 2.0, 0.0, 1.0);
  double cv = std::cos(M_PI * lam);

  std::vector<PartResult> parts;
  for (auto& s : sides) {
    s.c[nd->virtual_even_id] = cv;
    s.c[nd->virtual_odd_id] = cv;
    parts.push_back(solve_node(s.node, s.c, ctx));
  }
  combine_split_duals(sides[0].node->piece, sides[0].c, parts[0].dual, sides[1].node->piece,
                      sides[1].c, parts[1].dual, nd->virtual_even_id, nd->virtual_odd_id);
  return glue_certificates(parts[0], nd->children[0]->vertex_map, parts[1],
                           nd->children[1]->vertex_map, n);
}

PartResult solve_node(const DecompositionNode* nd, const EdgeWeights& c, const Ctx& ctx) {
  switch (nd->kind) {
    case DecompositionNode::Kind::LeafOddK32:
      return solve_odd_k32_leaf(nd->piece, c, ctx);
    case DecompositionNode::Kind::LeafK32Free:
      return solve_k32free_leaf(nd->piece, c, ctx);
    default:
      return solve_join(nd, c, ctx);
  }
}

}  // namespace

SolveResult solve(const SignedGraph& g, const EdgeWeights& c, const SolveOptions& opts) {
  for (const auto& e : g.edges()) {
    auto it = c.find(e.id);
    if (it == c.end()) throw std::invalid_argument("solve: missing weight for edge " + e.id);
    if (std::abs(it->second) > 1.0 + 1e-9)
      throw std::invalid_argument("solve: weight outside [-1,1] on edge " + e.id);
  }
  const int n = g.vertex_count();
  SolveResult res;

  MetricVector x = to_metric(c);
  MembershipResult mem = met_membership(g, x, opts.tol);
  if (!mem.inside) {
    res.status = SolveResult::Status::Infeasible;
    res.witness = mem.witness;
    return res;
  }

  Ctx ctx{opts.tol, opts.max_cycles};
  ReducedInstance red = degenerate_reduce(g, c, opts.tol);
  const int rn = red.graph.vertex_count();

  // solve each connected component of the reduced graph, then overlay
  auto adj = red.graph.adjacency();
  std::vector<int> comp(rn, -1);
  int ncomp = 0;
  for (int v = 0; v < rn; ++v) {
    if (comp[v] != -1) continue;
    std::queue<int> q;
    q.push(v);
    comp[v] = ncomp;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      for (auto [w, ei] : adj[a])
        if (comp[w] == -1) {
          comp[w] = ncomp;
          q.push(w);
        }
    }
    ++ncomp;
  }

  std::optional<PartResult> acc;
  std::vector<int> averts;
  for (int ci = 0; ci < ncomp; ++ci) {
    std::vector<int> verts;
    std::vector<int> local(rn, -1);
    for (int v = 0; v < rn; ++v)
      if (comp[v] == ci) {
        local[v] = static_cast<int>(verts.size());
        verts.push_back(v);
      }
    PartResult pr;
    if (verts.size() == 1) {
      pr.P_low = pr.P_max = Eigen::MatrixXd::Ones(1, 1);
      pr.dual.vertex_omega.assign(1, 0.0);
    } else {
      std::vector<Edge> edges;
      EdgeWeights cc;
      for (const auto& e : red.graph.edges())
        if (comp[e.u] == ci) {
          edges.push_back({e.id, local[e.u], local[e.v], e.parity});
          cc[e.id] = red.c.at(e.id);
        }
      SignedGraph sub(static_cast<int>(verts.size()), std::move(edges));
      auto node = decompose(sub);
      pr = solve_node(node.get(), cc, ctx);
    }
    if (!acc) {
      acc = std::move(pr);
      averts = verts;
    } else {
      std::vector<int> uv;
      acc = glue_impl(*acc, averts, pr, verts, &uv);
      averts = std::move(uv);
    }
  }

  Eigen::MatrixXd pl_red = Eigen::MatrixXd::Zero(acc->P_low.rows(), rn);
  Eigen::MatrixXd pm_red = Eigen::MatrixXd::Zero(acc->P_max.rows(), rn);
  std::vector<double> vo_red(rn, 0.0);
  for (size_t i = 0; i < averts.size(); ++i) {
    pl_red.col(averts[i]) = acc->P_low.col(i);
    pm_red.col(averts[i]) = acc->P_max.col(i);
    vo_red[averts[i]] = acc->dual.vertex_omega[i];
  }

  // lift through the degenerate reduction
  Eigen::MatrixXd pl(pl_red.rows(), n), pm(pm_red.rows(), n);
  for (int v = 0; v < n; ++v) {
    pl.col(v) = red.sign[v] * pl_red.col(red.vertex_map[v]);
    pm.col(v) = red.sign[v] * pm_red.col(red.vertex_map[v]);
  }
  res.low_rank = make_completion(pl, opts.rank_tol);
  res.max_rank = make_completion(pm, opts.rank_tol);

  res.dual.vertex_omega.assign(n, 0.0);
  std::vector<char> rep_taken(rn, 0);
  for (int v = 0; v < n; ++v) {
    int rv = red.vertex_map[v];
    if (!rep_taken[rv]) {
      rep_taken[rv] = 1;
      res.dual.vertex_omega[v] = vo_red[rv];
    }
  }
  for (const auto& [id, w] : acc->dual.edge_omega) {
    const Edge& e = g.edge(id);  // reduced edges keep their original ids
    res.dual.edge_omega[id] = red.sign[e.u] * red.sign[e.v] * w;
  }
  // contracted degenerate edges carry the rank-one merge certificates
  for (const auto& e : g.edges()) {
    if (red.graph.find_edge(e.id)) continue;
    double s = red.sign[e.u] * red.sign[e.v];
    double want = e.parity == Parity::Odd ? -1.0 : 1.0;
    if (s != want || std::abs(c.at(e.id) - s) > 1e-9) continue;
    res.dual.edge_omega[e.id] += -2.0 * s;
    res.dual.vertex_omega[e.u] += 1.0;
    res.dual.vertex_omega[e.v] += 1.0;
  }

  int dual_rank = numerical_rank(res.dual.matrix(g), opts.rank_tol);
  res.strict_complementarity = res.max_rank.rank + dual_rank == n;
  return res;
}

}  // namespace sgc
