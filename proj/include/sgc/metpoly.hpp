#ifndef SGC_METPOLY_HPP
#define SGC_METPOLY_HPP

#include <limits>
#include <map>

#include "sgc/sgraph.hpp"

namespace sgc {

inline constexpr double kTolX = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// cosine weights c(e) in [-1,1]
using EdgeWeights = std::map<EdgeId, double>;
/// x(e) = arccos(c(e))/pi in [0,1]
using MetricVector = std::map<EdgeId, double>;

MetricVector to_metric(const EdgeWeights& c);
EdgeWeights to_cosines(const MetricVector& x);

/// x-space contribution of one edge to a cycle or path value: x(e) for even
/// edges, 1-x(e) for odd ones.
double edge_contribution(const Edge& e, const MetricVector& x);

/// val(H,x) over an edge multiset
double val(const SignedGraph& g, const MetricVector& x, const std::vector<EdgeId>& h);

MetricVector resign_metric(const SignedGraph& g, const MetricVector& x, const std::set<int>& s);
EdgeWeights resign_cosines(const SignedGraph& g, const EdgeWeights& c, const std::set<int>& s);

enum class PathMode { Auto, Walk, Path };

/// Minimum val over u-v connections of the given total parity; +inf if none.
/// Walk mode runs Dijkstra on the parity double cover; path mode enumerates
/// simple paths (desk scale). Auto picks path mode for at most 16 vertices.
double lambda_value(const SignedGraph& g, const MetricVector& x, int u, int v, Parity parity,
                    PathMode mode = PathMode::Auto);
double lambda_even(const SignedGraph& g, const MetricVector& x, int u, int v,
                   PathMode mode = PathMode::Auto);
double lambda_odd(const SignedGraph& g, const MetricVector& x, int u, int v,
                  PathMode mode = PathMode::Auto);

struct MembershipResult {
  bool inside = true;
  double margin = kInf;           // (min odd cycle val) - 1, +inf if balanced
  std::vector<EdgeId> witness;    // a minimizing simple odd cycle when finite
};

MembershipResult met_membership(const SignedGraph& g, const MetricVector& x,
                                double tol = kTolX);

struct EdgeFlags {
  bool degenerate = false;
  bool tight = false;
  bool strictly_tight = false;  // tight via a cycle of length >= 3
};
using TightFlags = std::map<EdgeId, EdgeFlags>;

/// Requires met_membership inside (throws otherwise).
TightFlags tight_flags(const SignedGraph& g, const MetricVector& x, double tol = kTolX);

struct CycleList {
  std::vector<std::vector<EdgeId>> cycles;
  bool complete = true;  // false when the cap was hit
};

/// All simple odd cycles (including 2-cycles), capped.
CycleList enumerate_odd_cycles(const SignedGraph& g, int max_cycles = 10000);

/// Line search: decreases x on even non-frozen edges and increases it on odd
/// ones (every odd cycle value decreases monotonically), freezing edges as
/// they become tight or degenerate, until all edges are frozen. Stays inside
/// MET throughout.
MetricVector push_to_tight(const SignedGraph& g, const MetricVector& x,
                           const std::set<EdgeId>& frozen = {}, double tol = kTolX,
                           int max_cycles = 10000);

}  // namespace sgc

#endif
