#ifndef SGC_COMPLETE_HPP
#define SGC_COMPLETE_HPP

#include <Eigen/Dense>

#include "sgc/tightstruct.hpp"

namespace sgc {

inline constexpr double kRankTol = 1e-7;  // relative numerical rank threshold

int numerical_rank(const Eigen::MatrixXd& m, double rank_tol = kRankTol);

/// Drops numerically dependent rows of a point configuration (SVD basis).
Eigen::MatrixXd compress_rows(const Eigen::MatrixXd& p, double rank_tol = kRankTol);

struct Completion {
  Eigen::MatrixXd P;  // d x n, unit columns
  int rank = 0;
  Eigen::MatrixXd gram() const { return P.transpose() * P; }
};

Completion make_completion(Eigen::MatrixXd p, double rank_tol = kRankTol);

struct DualCertificate {
  std::vector<double> vertex_omega;       // one entry per vertex
  std::map<EdgeId, double> edge_omega;    // support; signs follow edge parity

  Eigen::MatrixXd matrix(const SignedGraph& g) const;
  bool zero(double tol = 1e-12) const;
};

struct CycleRealization {
  std::vector<int> verts;  // traversal order
  Eigen::MatrixXd P;       // 2 x |verts|, columns follow verts
};

/// Unit-circle placement of a tight odd cycle; Gram reproduces c on every
/// cycle edge. Throws when the closure fails (cycle not tight).
CycleRealization realize_tight_cycle(const SignedGraph& g, const std::vector<EdgeId>& cycle,
                                     const EdgeWeights& c, double tol = 1e-7);

/// Nice dual supported exactly on the cycle: nonzero on every cycle edge,
/// sign matching parity, PSD of rank |cycle| - 2, annihilating every feasible
/// completion. Cycle length must be >= 3.
DualCertificate cycle_stress(const SignedGraph& g, const std::vector<EdgeId>& cycle,
                             const EdgeWeights& c, double tol = 1e-7);

struct PathReduction {
  SignedGraph graph;  // interior vertices removed, one new edge added
  EdgeWeights c;
  EdgeId new_edge;
  std::vector<int> vertex_map;     // original -> reduced, -1 for interior
  std::vector<int> path_vertices;  // v_0 .. v_k in original indexing
  std::vector<double> theta;       // cumulative placement angles per path vertex
  std::vector<double> sgn;         // +-1 placement flips per path vertex
};

/// Replaces a path whose interior vertices have degree 2 by a single edge
/// carrying the summed angle. Requires the angle sum to stay within [0, pi]
/// (guaranteed when the path lies inside a tight odd cycle).
PathReduction path_reduce(const SignedGraph& g, const EdgeWeights& c,
                          const std::vector<EdgeId>& path_edges, int start_vertex,
                          const EdgeId& new_edge_id);

/// Re-inserts the interior points on the arc between the endpoint points.
/// The reduced completion must satisfy the new edge with equality.
Eigen::MatrixXd path_lift(const PathReduction& pr, const Eigen::MatrixXd& reduced_p);

/// Unique rank <= 2 completion of an instance all of whose edges are tight or
/// degenerate (2-connected, odd-K4 and odd-K3^2 minor free).
Eigen::MatrixXd solve_all_tight(const SignedGraph& g, const EdgeWeights& c);

/// Maximum-rank construction: rotates hypergraph fractions into fresh
/// dimensions; intra-hyperedge products are preserved exactly and every other
/// product moves by less than min_slack / 2. Requires h acyclic.
Eigen::MatrixXd rotate_fractions(const Eigen::MatrixXd& p, const Hypergraph& h,
                                 double min_slack);

struct SolveResult {
  enum class Status { Solved, Infeasible };
  Status status = Status::Solved;
  std::vector<EdgeId> witness;  // violated odd cycle when infeasible
  Completion low_rank;          // rank <= 3
  Completion max_rank;
  DualCertificate dual;
  bool strict_complementarity = false;
};

struct SolveOptions {
  double tol = kTolX;
  double rank_tol = kRankTol;
  int max_cycles = 10000;
};

/// Full pipeline: degenerate reduction, membership, decomposition, leaf
/// solvers, gluing. Input must be odd-K4 minor free.
SolveResult solve(const SignedGraph& g, const EdgeWeights& c, const SolveOptions& opts = {});

struct PartResult {
  Eigen::MatrixXd P_low, P_max;
  DualCertificate dual;
};

/// Combines two solved parts meeting in a shared vertex set (boundary Grams
/// must agree). max ranks add minus the shared rank; low embeds the smaller
/// part into the larger part's span; duals sum with cancelled entries dropped.
PartResult glue_certificates(const PartResult& a, const std::vector<int>& map_a,
                             const PartResult& b, const std::vector<int>& map_b, int n);

/// Normalizes the virtual-edge dual weights of the two sides of a strong
/// 2-split so that the four values cancel, by adding tight-cycle stresses
/// through the virtual edges and positive rescaling.
void combine_split_duals(const SignedGraph& g1, const EdgeWeights& c1, DualCertificate& d1,
                         const SignedGraph& g2, const EdgeWeights& c2, DualCertificate& d2,
                         const EdgeId& virt_even, const EdgeId& virt_odd);

}  // namespace sgc

#endif
