#include "sgc/classify.hpp"

#include <cmath>

#include "sgc/oracle.hpp"

namespace sgc {

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// max constraint violation of a candidate Gram
double gram_residual(const SignedGraph& g, const EdgeWeights& c, const Eigen::MatrixXd& X) {
  double r = 0.0;
  for (int i = 0; i < X.rows(); ++i) r = std::max(r, std::abs(X(i, i) - 1.0));
  for (const auto& e : g.edges()) {
    double s = sign_of(e.parity) * (X(e.u, e.v) - c.at(e.id));
    r = std::max(r, -s);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
  r = std::max(r, -es.eigenvalues().minCoeff());
  return r;
}

}  // namespace

UniquenessVerdict classify_unique(const SignedGraph& g, const EdgeWeights& c,
                                  const SolveOptions& opts) {
  using Class = UniquenessVerdict::Class;
  if (g.edge_count() <= kMinorEdgeLimit && has_minor(g, MinorPattern::OddK4))
    throw std::invalid_argument("classify_unique: instance has an odd-K4 minor");

  UniquenessVerdict v;
  MetricVector x = to_metric(c);
  MembershipResult mem = met_membership(g, x, opts.tol);
  if (!mem.inside) {
    v.cls = Class::Infeasible;
    return v;
  }

  ReducedInstance red = degenerate_reduce(g, c, opts.tol);
  TightCycleSet ts =
      enumerate_tight_cycles(red.graph, to_metric(red.c), opts.tol, opts.max_cycles);
  v.hypergraph = build_hypergraph(red.graph, ts);

  switch (classify_hypergraph(v.hypergraph)) {
    case HypergraphClass::SingleVertex:
      v.cls = Class::UniqueRank1;
      break;
    case HypergraphClass::SpanningHyperedge:
      v.cls = Class::UniqueRank2;
      break;
    case HypergraphClass::Triangle:
      if (g.edge_count() <= kMinorEdgeLimit && !has_minor(g, MinorPattern::OddK32))
        throw std::logic_error("classify_unique: triangle hypergraph on a K3^2 free instance");
      v.cls = Class::UniqueRank3;
      break;
    case HypergraphClass::Other:
      v.cls = Class::NotUnique;
      break;
  }

  if (v.cls == Class::NotUnique) {
    // second solution: the max-rank completion differs from the low-rank one
    // whenever the fraction rotation moved anything; otherwise probe
    SolveResult sr = solve(g, c, opts);
    Eigen::MatrixXd x1 = sr.low_rank.gram();
    Eigen::MatrixXd x2 = sr.max_rank.gram();
    if (max_abs_diff(x1, x2) > 1e-6 && gram_residual(g, c, x2) < 1e-7) {
      v.witness = x2;
    } else {
      try {
        UniquenessResult ur = uniqueness_oracle(g, c);
        if (ur.found_two) {
          Eigen::MatrixXd w =
              max_abs_diff(x1, ur.X1) > max_abs_diff(x1, ur.X2) ? ur.X1 : ur.X2;
          if (max_abs_diff(x1, w) > 1e-6) v.witness = w;
        }
      } catch (const std::exception&) {
        // probe failed to converge; leave the witness empty
      }
    }
  }
  return v;
}

UniquenessVerdict classify_rigidity(const Tensegrity& t, const SolveOptions& opts) {
  using Class = UniquenessVerdict::Class;
  const int n = t.graph.vertex_count();
  if (t.p.cols() != n) throw std::invalid_argument("classify_rigidity: configuration size mismatch");
  for (int i = 0; i < n; ++i)
    if (std::abs(t.p.col(i).norm() - 1.0) > 1e-8)
      throw std::invalid_argument("classify_rigidity: configuration not unit");

  EdgeWeights c;
  for (const auto& e : t.graph.edges()) c[e.id] = t.p.col(e.u).dot(t.p.col(e.v));

  UniquenessVerdict v = classify_unique(t.graph, c, opts);
  int k = 0;
  if (v.cls == Class::UniqueRank1) k = 1;
  if (v.cls == Class::UniqueRank2) k = 2;
  if (v.cls == Class::UniqueRank3) k = 3;
  if (k > 0 && numerical_rank(t.p, opts.rank_tol) > k)
    throw std::logic_error("classify_rigidity: configuration rank exceeds the unique rank");
  return v;
}

SuperStableResult super_stable_check(const Tensegrity& t, const DualCertificate& dual,
                                     double rank_tol) {
  const int n = t.graph.vertex_count();
  if (t.p.cols() != n)
    throw std::invalid_argument("super_stable_check: configuration size mismatch");
  if (!dual.vertex_omega.empty() && static_cast<int>(dual.vertex_omega.size()) != n)
    throw std::invalid_argument("super_stable_check: dual size mismatch");

  SuperStableResult res;
  Eigen::MatrixXd q = compress_rows(t.p, rank_tol);
  const int d = static_cast<int>(q.rows());

  Eigen::MatrixXd omega = dual.matrix(t.graph);
  int nullity = n - numerical_rank(omega, rank_tol);
  if (nullity != d) {
    res.reason = "corank";
    return res;
  }

  // symmetric d x d unknown S, one row per vanishing product
  const int dim = d * (d + 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) pairs.emplace_back(i, i);
  for (const auto& [id, w] : dual.edge_omega)
    if (std::abs(w) > 1e-12) {
      const Edge& e = t.graph.edge(id);
      pairs.emplace_back(e.u, e.v);
    }
  // a pair joined by both an even and an odd edge is a bar: the dual can
  // always carry cancelling weights there without changing its matrix, so
  // such pairs belong to the support set regardless of the given weights
  std::set<std::pair<int, int>> even_pairs, odd_pairs;
  for (const auto& e : t.graph.edges())
    (e.parity == Parity::Odd ? odd_pairs : even_pairs).insert(std::minmax(e.u, e.v));
  for (const auto& pr : even_pairs)
    if (odd_pairs.count(pr)) pairs.push_back(pr);

  Eigen::MatrixXd sys(static_cast<int>(pairs.size()), dim);
  for (size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    int col = 0;
    for (int k = 0; k < d; ++k)
      for (int l = k; l < d; ++l, ++col)
        sys(static_cast<int>(r), col) =
            k == l ? q(k, i) * q(k, j) : q(k, i) * q(l, j) + q(l, i) * q(k, j);
  }
  if (dim > 0 && numerical_rank(sys, rank_tol) < dim) {
    res.reason = "SAP-space";
    return res;
  }
  res.super_stable = true;
  return res;
}

}  // namespace sgc
