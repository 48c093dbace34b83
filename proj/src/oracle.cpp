#include "sgc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace sgc {

bool met_oracle(const SignedGraph& g, const MetricVector& x, double tol, int max_cycles) {
  auto cl = enumerate_odd_cycles(g, max_cycles);
  if (!cl.complete) throw std::runtime_error("met_oracle: cycle cap exceeded");
  for (const auto& cyc : cl.cycles)
    if (val(g, x, cyc) < 1.0 - tol) return false;
  return true;
}

namespace {

struct Problem {
  const SignedGraph& g;
  std::vector<double> c;     // per edge index
  std::vector<int> eu, ev;
  std::vector<double> dir;   // +1: X_ij - c <= 0 (odd), -1: c - X_ij <= 0 (even)

  explicit Problem(const SignedGraph& graph, const EdgeWeights& w) : g(graph) {
    for (const auto& e : g.edges()) {
      auto it = w.find(e.id);
      if (it == w.end()) throw std::invalid_argument("missing weight for edge " + e.id);
      c.push_back(it->second);
      eu.push_back(e.u);
      ev.push_back(e.v);
      dir.push_back(e.parity == Parity::Odd ? 1.0 : -1.0);
    }
  }

  // hinge violations; returns max violation (including unit norm error),
  // fills per-edge h
  double violations(const Eigen::MatrixXd& P, std::vector<double>* h) const {
    double worst = 0;
    h->resize(c.size());
    for (size_t k = 0; k < c.size(); ++k) {
      double xij = P.col(eu[k]).dot(P.col(ev[k]));
      double v = std::max(0.0, dir[k] * (xij - c[k]));
      (*h)[k] = v;
      worst = std::max(worst, v);
    }
    for (int i = 0; i < P.cols(); ++i)
      worst = std::max(worst, std::abs(P.col(i).squaredNorm() - 1.0));
    return worst;
  }

  double penalty(const Eigen::MatrixXd& P) const {
    std::vector<double> h;
    violations(P, &h);
    double f = 0;
    for (double v : h) f += v * v;
    return f;
  }

  // gradient of the squared-hinge penalty
  Eigen::MatrixXd penalty_grad(const Eigen::MatrixXd& P) const {
    std::vector<double> h;
    violations(P, &h);
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(P.rows(), P.cols());
    for (size_t k = 0; k < c.size(); ++k) {
      if (h[k] <= 0) continue;
      double s = 2.0 * h[k] * dir[k];
      grad.col(eu[k]) += s * P.col(ev[k]);
      grad.col(ev[k]) += s * P.col(eu[k]);
    }
    return grad;
  }
};

void normalize_columns(Eigen::MatrixXd& P) {
  for (int i = 0; i < P.cols(); ++i) {
    double n = P.col(i).norm();
    if (n < 1e-300) {
      P(0, i) = 1.0;
      n = 1.0;
    } else {
      P.col(i) /= n;
    }
  }
}

// projected gradient descent on f = penalty + extra (extra may be empty);
// objective(P) and gradient(P) supplied by callables
template <class F, class G>
void descend(Eigen::MatrixXd& P, F&& objective, G&& gradient, int iters, double f_stop) {
  double step = 1.0;
  double f = objective(P);
  for (int it = 0; it < iters && f > f_stop; ++it) {
    Eigen::MatrixXd grad = gradient(P);
    // tangent component only; radial parts die in the renormalization anyway
    for (int i = 0; i < P.cols(); ++i)
      grad.col(i) -= grad.col(i).dot(P.col(i)) * P.col(i);
    double gn = grad.squaredNorm();
    if (gn < 1e-300) break;
    step *= 2.0;
    bool moved = false;
    for (int bt = 0; bt < 50; ++bt) {
      Eigen::MatrixXd Q = P - step * grad;
      normalize_columns(Q);
      double fq = objective(Q);
      if (fq < f - 1e-4 * step * gn || fq < f * (1 - 1e-12)) {
        P = std::move(Q);
        f = fq;
        moved = true;
        break;
      }
      step /= 2.0;
    }
    if (!moved) break;
  }
}

// Gauss-Newton refinement of a near-feasible configuration: force unit norms
// and every violated or nearly tight edge to exact equality. Quadratic local
// convergence where first order projections crawl (all solutions singular).
Eigen::MatrixXd newton_polish(const SignedGraph& g, const EdgeWeights& c, Eigen::MatrixXd P,
                              int rounds = 40) {
  const int n = static_cast<int>(P.cols()), d = static_cast<int>(P.rows());
  double best_seen = kInf;
  int stall = 0;
  for (int round = 0; round < rounds; ++round) {
    double viol = 0.0;
    for (int i = 0; i < n; ++i) viol = std::max(viol, std::abs(P.col(i).squaredNorm() - 1.0));
    for (const auto& e : g.edges())
      viol = std::max(viol, sign_of(e.parity) * (c.at(e.id) - P.col(e.u).dot(P.col(e.v))));
    if (viol < 1e-13) break;
    if (viol < best_seen * 0.9) {
      best_seen = viol;
      stall = 0;
    } else if (++stall >= 5) {
      break;  // infeasible targets, stop burning rounds
    }
    // force only edges violated or within a few violations of equality;
    // a wide fixed margin drags genuinely slack edges into the system and
    // makes it inconsistent
    double act = std::min(1e-4, std::max(8.0 * viol, 1e-12));
    std::vector<std::tuple<int, int, double>> eqs;  // (u, v, target); u == v for norms
    for (int i = 0; i < n; ++i) eqs.emplace_back(i, i, 1.0);
    for (const auto& e : g.edges()) {
      double gap = sign_of(e.parity) * (P.col(e.u).dot(P.col(e.v)) - c.at(e.id));
      if (gap < act) eqs.emplace_back(e.u, e.v, c.at(e.id));
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<int>(eqs.size()), d * n);
    Eigen::VectorXd r(static_cast<int>(eqs.size()));
    for (size_t k = 0; k < eqs.size(); ++k) {
      auto [u, v, tgt] = eqs[k];
      r(static_cast<int>(k)) = P.col(u).dot(P.col(v)) - tgt;
      J.row(static_cast<int>(k)).segment(d * u, d) += P.col(v).transpose();
      J.row(static_cast<int>(k)).segment(d * v, d) += P.col(u).transpose();
    }
    if (r.cwiseAbs().maxCoeff() < 1e-13) break;
    auto svd = J.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    Eigen::VectorXd step = svd.solve(-r);
    Eigen::Map<const Eigen::MatrixXd> S(step.data(), d, n);
    // backtrack on the equality residual; full steps overshoot when the
    // Jacobian is rank deficient at a low rank solution
    double base = r.norm();
    double t = 1.0;
    for (int bt = 0; bt < 12; ++bt, t /= 2.0) {
      Eigen::MatrixXd Q = P + t * S;
      double nn = 0.0;
      for (size_t k = 0; k < eqs.size(); ++k) {
        auto [u, v, tgt] = eqs[k];
        double rv = Q.col(u).dot(Q.col(v)) - tgt;
        nn += rv * rv;
      }
      if (std::sqrt(nn) < base) {
        P = std::move(Q);
        break;
      }
    }
  }
  return P;
}

Eigen::MatrixXd random_config(int d, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd P(d, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) P(i, j) = nd(rng);
  normalize_columns(P);
  return P;
}

// The feasibility problem is convex in Gram space: PSD with unit diagonal
// intersected with per-pair boxes. Alternating projections converge whenever
// the instance is feasible; entries pinned to +-1 are eliminated first by
// merging the endpoints (they make the sets tangent and the iteration crawl).
struct ConvexFeasibility {
  int n = 0;                       // merged size
  std::vector<int> cls;            // original vertex -> class
  std::vector<double> sgn;         // +-1 per original vertex
  std::map<std::pair<int, int>, std::pair<double, double>> box;  // merged pairs
  bool box_consistent = true;

  explicit ConvexFeasibility(const SignedGraph& g, const EdgeWeights& w) {
    const int N = g.vertex_count();
    std::map<std::pair<int, int>, std::pair<double, double>> raw;
    for (const auto& e : g.edges()) {
      auto key = std::minmax(e.u, e.v);
      auto& [lo, hi] = raw.try_emplace(key, -1.0, 1.0).first->second;
      double c = std::clamp(w.at(e.id), -1.0, 1.0);
      if (e.parity == Parity::Odd)
        hi = std::min(hi, c);
      else
        lo = std::max(lo, c);
    }

    // union classes along entries pinned to +-1
    std::vector<int> parent(N);
    std::vector<double> rel(N, 1.0);  // sign relative to the root
    for (int i = 0; i < N; ++i) parent[i] = i;
    std::function<std::pair<int, double>(int)> find = [&](int v) -> std::pair<int, double> {
      if (parent[v] == v) return {v, 1.0};
      auto [r, s] = find(parent[v]);
      parent[v] = r;
      rel[v] *= s;
      return {r, rel[v]};
    };
    for (const auto& [key, lh] : raw) {
      double pin = 0.0;
      if (lh.first >= 1.0 - 1e-12) pin = 1.0;
      if (lh.second <= -1.0 + 1e-12) pin = -1.0;
      if (pin == 0.0) continue;
      auto [ru, su] = find(key.first);
      auto [rv, sv] = find(key.second);
      if (ru == rv) {
        if (su * sv * pin < 0) box_consistent = false;
        continue;
      }
      parent[ru] = rv;
      rel[ru] = pin * su * sv;
    }
    cls.assign(N, -1);
    sgn.assign(N, 1.0);
    std::map<int, int> roots;
    for (int i = 0; i < N; ++i) {
      auto [r, s] = find(i);
      sgn[i] = s;
      auto it = roots.try_emplace(r, static_cast<int>(roots.size())).first;
      cls[i] = it->second;
    }
    n = static_cast<int>(roots.size());

    for (const auto& [key, lh] : raw) {
      int a = cls[key.first], b = cls[key.second];
      double s = sgn[key.first] * sgn[key.second];
      double lo = s > 0 ? lh.first : -lh.second;
      double hi = s > 0 ? lh.second : -lh.first;
      if (a == b) {
        if (lo > 1.0 + 1e-6 || hi < 1.0 - 1e-6) box_consistent = false;
        continue;
      }
      auto mk = std::minmax(a, b);
      auto& [l2, h2] = box.try_emplace(mk, -1.0, 1.0).first->second;
      l2 = std::max(l2, lo);
      h2 = std::min(h2, hi);
      // tiny inversions (rounding on marginally tight instances) are midpointed
      // in run(); only a real gap rules the convex phase out
      if (l2 > h2 + 1e-6) box_consistent = false;
    }
  }

  // merged Gram from a configuration on the original vertices
  Eigen::MatrixXd merge(const Eigen::MatrixXd& P) const {
    Eigen::MatrixXd X0 = P.transpose() * P;
    Eigen::MatrixXd Xm = Eigen::MatrixXd::Identity(n, n);
    for (size_t i = 0; i < cls.size(); ++i)
      for (size_t j = 0; j < cls.size(); ++j)
        Xm(cls[i], cls[j]) = sgn[i] * sgn[j] * X0(i, j);
    return Xm;
  }

  // alternating projections; returns the PSD iterate (box nearly satisfied)
  Eigen::MatrixXd run(int iters, Eigen::MatrixXd X = {}) const {
    if (X.size() == 0) X = Eigen::MatrixXd::Identity(n, n);
    for (int it = 0; it < iters; ++it) {
      for (int i = 0; i < n; ++i) X(i, i) = 1.0;
      for (const auto& [key, lh] : box) {
        double lo = lh.first, hi = lh.second;
        if (lo > hi) lo = hi = (lo + hi) / 2;
        double v = std::clamp(X(key.first, key.second), lo, hi);
        X(key.first, key.second) = X(key.second, key.first) = v;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
      if (es.eigenvalues().minCoeff() >= -1e-13) break;
      X = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
          es.eigenvectors().transpose();
    }
    return X;
  }

  // lift a merged Gram to a unit configuration on the original vertices
  Eigen::MatrixXd lift(const Eigen::MatrixXd& X) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
    Eigen::MatrixXd P = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                        es.eigenvectors().transpose();
    normalize_columns(P);
    Eigen::MatrixXd full(P.rows(), cls.size());
    for (size_t v = 0; v < cls.size(); ++v) full.col(v) = sgn[v] * P.col(cls[v]);
    return full;
  }
};

}  // namespace

FeasibilityResult feasibility_oracle(const SignedGraph& g, const EdgeWeights& c, int d,
                                     int restarts, int iters, std::uint64_t seed) {
  const int n = g.vertex_count();
  if (d <= 0) d = n;
  Problem prob(g, c);
  std::mt19937_64 rng(seed);
  FeasibilityResult best;
  best.best_residual = kInf;

  auto refine = [&](Eigen::MatrixXd P, double res,
                    const ConvexFeasibility* cf) -> std::pair<Eigen::MatrixXd, double> {
    std::vector<double> h;
    // projections stall when every solution is singular; Newton steps on the
    // active constraints stall on a bad active set. Alternating the two
    // escapes both failure modes.
    for (int phase = 0; phase < 6 && res > 1e-9 && res < 0.5; ++phase) {
      Eigen::MatrixXd Q;
      if (phase % 2 == 0) {
        Q = newton_polish(g, c, P);
      } else if (cf) {
        Q = cf->lift(cf->run(4000, cf->merge(P)));
      } else {
        continue;
      }
      double rq = prob.violations(Q, &h);
      if (rq < res) {
        res = rq;
        P = std::move(Q);
      } else if (phase % 2 == 1) {
        break;  // a full alternation without progress
      }
    }
    if (res > 1e-9 && res < 1e-2) {
      // when every solution has low rank, the full rank parametrization is a
      // flat valley; retry Newton from spectral truncations of the iterate
      Eigen::MatrixXd X = P.transpose() * P;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
      for (int rk = 1; rk <= n && res > 1e-9; ++rk) {
        Eigen::MatrixXd Q(rk, n);
        for (int j = 0; j < rk; ++j)
          Q.row(j) = std::sqrt(std::max(es.eigenvalues()(n - 1 - j), 0.0)) *
                     es.eigenvectors().col(n - 1 - j).transpose();
        Q = newton_polish(g, c, Q);
        double rq = prob.violations(Q, &h);
        if (rq < res) {
          res = rq;
          P = std::move(Q);
        }
      }
    }
    return {std::move(P), res};
  };

  // convex phase first; the multi-start descent below only matters for
  // infeasible instances, where it reports a meaningful best residual
  ConvexFeasibility cf(g, c);
  if (d >= n && cf.box_consistent) {
    std::vector<double> h;
    Eigen::MatrixXd P = cf.lift(cf.run(20000));
    double res = prob.violations(P, &h);
    std::tie(P, res) = refine(std::move(P), res, &cf);
    if (res < best.best_residual) {
      best.best_residual = res;
      best.P = P;
      best.X = P.transpose() * P;
    }
  }
  if (best.best_residual <= 1e-9) {
    best.found = true;
    return best;
  }

  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd P = random_config(d, n, rng);
    descend(
        P, [&](const Eigen::MatrixXd& Q) { return prob.penalty(Q); },
        [&](const Eigen::MatrixXd& Q) { return prob.penalty_grad(Q); }, iters, 1e-24);
    std::vector<double> h;
    double res = prob.violations(P, &h);
    if (res < best.best_residual) {
      best.best_residual = res;
      best.P = P;
      best.X = P.transpose() * P;
    }
    if (best.best_residual <= 1e-9) break;
  }
  if (best.best_residual > 1e-9 && best.best_residual < 0.5) {
    auto [Q, rq] = refine(best.P, best.best_residual,
                          d >= n && cf.box_consistent ? &cf : nullptr);
    if (rq < best.best_residual) {
      best.best_residual = rq;
      best.P = std::move(Q);
      best.X = best.P.transpose() * best.P;
    }
  }
  best.found = best.best_residual <= 1e-9;
  return best;
}

UniquenessResult uniqueness_oracle(const SignedGraph& g, const EdgeWeights& c, int trials,
                                   std::uint64_t seed) {
  const int n = g.vertex_count();
  Problem prob(g, c);
  auto feas = feasibility_oracle(g, c, n, 64, 5000, seed);
  if (!feas.found) throw std::runtime_error("uniqueness_oracle: no feasible point found");

  UniquenessResult out;
  out.X1 = feas.X;
  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> nd;
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) R(i, j) = R(j, i) = nd(rng);
    R /= R.norm();

    Eigen::MatrixXd P = feas.P;
    // small kick off the reference point
    P += 0.05 * random_config(n, n, rng);
    normalize_columns(P);
    for (double mu : {1e2, 1e3, 1e4, 1e5, 1e6}) {
      descend(
          P,
          [&](const Eigen::MatrixXd& Q) {
            return mu * prob.penalty(Q) - (Q.transpose() * Q).cwiseProduct(R).sum();
          },
          [&](const Eigen::MatrixXd& Q) {
            return (mu * prob.penalty_grad(Q) - 2.0 * Q * R).eval();
          },
          400, -kInf);
    }
    // feasibility polish: descent, then convex projections from this Gram
    descend(
        P, [&](const Eigen::MatrixXd& Q) { return prob.penalty(Q); },
        [&](const Eigen::MatrixXd& Q) { return prob.penalty_grad(Q); }, 1000, 1e-24);
    std::vector<double> h;
    if (prob.violations(P, &h) > 1e-9) {
      ConvexFeasibility cf(g, c);
      if (!cf.box_consistent) continue;
      P = cf.lift(cf.run(5000, cf.merge(P)));
      if (double res = prob.violations(P, &h); res > 1e-9) {
        if (res < 1e-2) P = newton_polish(g, c, P);
        if (prob.violations(P, &h) > 1e-9) continue;
      }
    }
    Eigen::MatrixXd X = P.transpose() * P;
    if ((X - out.X1).cwiseAbs().maxCoeff() > 1e-6) {
      out.found_two = true;
      out.X2 = X;
      return out;
    }
  }
  return out;
}

namespace {

struct Builder {
  std::mt19937_64 rng;
  int next_edge = 0;

  EdgeId fresh() { return "e" + std::to_string(next_edge++); }

  int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

  // small connected non-bipartite block, free of both odd minors
  SignedGraph random_block(int nb) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::vector<Edge> edges;
      for (int u = 0; u < nb; ++u)
        for (int v = u + 1; v < nb; ++v) {
          int roll = pick(100);
          if (roll < 30)
            edges.push_back({fresh(), u, v, Parity::Even});
          else if (roll < 60)
            edges.push_back({fresh(), u, v, Parity::Odd});
          else if (roll < 68) {
            edges.push_back({fresh(), u, v, Parity::Even});
            edges.push_back({fresh(), u, v, Parity::Odd});
          }
        }
      SignedGraph g(nb, edges);
      if (!g.connected() || is_bipartite(g).bipartite) continue;
      if (g.edge_count() > kMinorEdgeLimit) continue;
      if (has_minor(g, MinorPattern::OddK4) || has_minor(g, MinorPattern::OddK32)) continue;
      return g;
    }
    throw std::logic_error("random_block: generation failed");
  }

  SignedGraph odd_k32_block() {
    std::vector<Edge> edges;
    for (int u = 0; u < 3; ++u)
      for (int v = u + 1; v < 3; ++v) {
        edges.push_back({fresh(), u, v, Parity::Even});
        edges.push_back({fresh(), u, v, Parity::Odd});
      }
    return SignedGraph(3, edges);
  }

  // glue block onto acc, identifying block vertex 0 with a random acc vertex
  SignedGraph attach_cut(const SignedGraph& acc, const SignedGraph& block) {
    int a = pick(acc.vertex_count());
    int base = acc.vertex_count();
    auto remap = [&](int v) { return v == 0 ? a : base + v - 1; };
    std::vector<Edge> edges = acc.edges();
    for (const auto& e : block.edges())
      edges.push_back({e.id, remap(e.u), remap(e.v), e.parity});
    return SignedGraph(base + block.vertex_count() - 1, edges);
  }

  // overlay two blocks on a shared vertex pair, forming a strong 2-split;
  // each block keeps >= 3 vertices and stays non-bipartite
  SignedGraph overlay_pair(const SignedGraph& b1, const SignedGraph& b2) {
    // shared pair = vertices 0,1 of both blocks
    int base = b1.vertex_count();
    std::vector<Edge> edges = b1.edges();
    for (const auto& e : b2.edges()) {
      auto remap = [&](int v) { return v <= 1 ? v : base + v - 2; };
      edges.push_back({e.id, remap(e.u), remap(e.v), e.parity});
    }
    return SignedGraph(base + b2.vertex_count() - 2, edges);
  }

  // block safe for a split composition: adding the even+odd virtual pattern
  // on (0,1) must keep it odd-K4 minor free
  SignedGraph split_part(int nb) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      SignedGraph g = random_block(nb);
      std::vector<Edge> with = g.edges();
      with.push_back({"__ve", 0, 1, Parity::Even});
      with.push_back({"__vo", 0, 1, Parity::Odd});
      SignedGraph probe(g.vertex_count(), with);
      if (probe.edge_count() > kMinorEdgeLimit) continue;
      if (has_minor(probe, MinorPattern::OddK4)) continue;
      return g;
    }
    throw std::logic_error("split_part: generation failed");
  }
};

}  // namespace

GeneratedInstance generate_instance(std::uint64_t seed, int size, InstanceKind kind) {
  Builder b{std::mt19937_64(seed), 0};
  SignedGraph g;
  if (kind == InstanceKind::WithSplits) {
    g = b.overlay_pair(b.split_part(3 + b.pick(2)), b.split_part(3 + b.pick(2)));
  } else {
    g = kind == InstanceKind::WithK32Leaves ? b.odd_k32_block() : b.random_block(3 + b.pick(2));
  }
  while (g.vertex_count() < size) {
    SignedGraph block = (kind == InstanceKind::WithK32Leaves && b.pick(2) == 0)
                            ? b.odd_k32_block()
                            : b.random_block(3 + b.pick(2));
    g = b.attach_cut(g, block);
  }
  if (g.edge_count() <= kMinorEdgeLimit && has_minor(g, MinorPattern::OddK4))
    throw std::logic_error("generate_instance: composition produced an odd-K4 minor");

  // dyadic starting point, blended toward the always-feasible x = 1/2
  MetricVector x;
  for (const auto& e : g.edges()) x[e.id] = (13 + b.pick(39)) / 64.0;
  if (!met_membership(g, x).inside) {
    double lo = 0, hi = 1;
    auto blend = [&](double t) {
      MetricVector y;
      for (auto& [id, v] : x) y[id] = 0.5 + t * (v - 0.5);
      return y;
    };
    for (int it = 0; it < 40; ++it) {
      double mid = (lo + hi) / 2;
      (met_membership(g, blend(mid), 0.0).inside ? lo : hi) = mid;
    }
    x = blend(lo);
  }
  if (b.pick(2) == 0) x = push_to_tight(g, x);
  return {g, to_cosines(x)};
}

}  // namespace sgc
