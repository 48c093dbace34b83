#ifndef SGC_CLASSIFY_HPP
#define SGC_CLASSIFY_HPP

#include <optional>

#include "sgc/complete.hpp"

namespace sgc {

struct UniquenessVerdict {
  enum class Class { UniqueRank1, UniqueRank2, UniqueRank3, NotUnique, Infeasible };
  Class cls = Class::NotUnique;
  Hypergraph hypergraph;  // on the reduced vertex set
  // second feasible Gram (original vertex set) when the solution is not unique
  std::optional<Eigen::MatrixXd> witness;
};

/// Uniqueness of the feasible completion, decided by the shape of the tight
/// cycle hypergraph after degenerate reduction. Input must be odd-K4 minor
/// free (checked when small enough for the exhaustive minor test).
UniquenessVerdict classify_unique(const SignedGraph& g, const EdgeWeights& c,
                                  const SolveOptions& opts = {});

struct Tensegrity {
  SignedGraph graph;
  Eigen::MatrixXd p;  // d x n, unit columns
};

/// Universal rigidity of a spherical tensegrity: takes c(ij) = p(i).p(j) and
/// delegates to classify_unique. A UniqueRank_k verdict is cross-checked
/// against dim span p(V) <= k.
UniquenessVerdict classify_rigidity(const Tensegrity& t, const SolveOptions& opts = {});

struct SuperStableResult {
  bool super_stable = false;
  std::string reason;  // "corank" or "SAP-space" when it fails
};

/// Super stability test: the dual matrix must have nullity equal to
/// d = dim span p(V), and the only symmetric d x d matrix S with
/// p(i)^T S p(i) = 0 for all vertices and p(i)^T S p(j) = 0 on the dual
/// support must be S = 0.
SuperStableResult super_stable_check(const Tensegrity& t, const DualCertificate& dual,
                                     double rank_tol = kRankTol);

}  // namespace sgc

#endif
