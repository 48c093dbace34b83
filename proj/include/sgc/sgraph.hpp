#ifndef SGC_SGRAPH_HPP
#define SGC_SGRAPH_HPP

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgc {

using EdgeId = std::string;

enum class Parity { Even, Odd };

inline double sign_of(Parity p) { return p == Parity::Odd ? -1.0 : 1.0; }

struct Edge {
  EdgeId id;
  int u = 0;
  int v = 0;
  Parity parity = Parity::Even;
};

/// Signed multigraph. Parallel edges are allowed, loops are dropped on
/// construction. Edge ids are unique and survive resigning and contraction.
class SignedGraph {
 public:
  SignedGraph() = default;
  SignedGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Edge& edge(const EdgeId& id) const;
  const Edge* find_edge(const EdgeId& id) const;

  bool connected() const;
  bool two_connected() const;
  /// adjacency as (neighbor, edge index) lists
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

SignedGraph resign(const SignedGraph& g, const std::set<int>& s);

struct ContractionResult {
  SignedGraph graph;
  std::vector<int> vertex_map;  // old vertex -> new vertex
};

/// Contracts an even edge, merging its endpoints. Loops created by the
/// contraction are deleted. Throws if the edge is odd or missing.
ContractionResult contract_even(const SignedGraph& g, const EdgeId& e);

struct BipartiteResult {
  bool bipartite = false;
  std::set<int> resign_set;        // valid when bipartite
  std::vector<EdgeId> odd_cycle;   // valid when not bipartite
};

BipartiteResult is_bipartite(const SignedGraph& g);

std::optional<int> find_cut_vertex(const SignedGraph& g);

struct Strong2Split {
  std::vector<EdgeId> side1;
  std::vector<EdgeId> side2;
  int u = 0;
  int v = 0;
};

std::optional<Strong2Split> find_strong_2_split(const SignedGraph& g);

enum class MinorPattern { OddK4, OddK32 };

/// Exhaustive minor test (deletions, even-edge contractions, resignings)
/// with memoization on canonical forms. Rejects instances with more than
/// kMinorEdgeLimit edges.
inline constexpr int kMinorEdgeLimit = 14;
bool has_minor(const SignedGraph& g, MinorPattern pattern);

/// Canonical string of g modulo resigning (spanning forest normalized to
/// all-even). Does not canonicalize vertex labels.
std::string resign_canonical_form(const SignedGraph& g);

struct DecompositionNode {
  enum class Kind { LeafOddK32, LeafK32Free, CutJoin, SplitJoin };
  Kind kind = Kind::LeafK32Free;
  SignedGraph piece;
  std::vector<int> vertex_map;  // piece vertex -> parent piece vertex
  // CutJoin
  int cut_vertex = -1;  // in this node's piece indexing
  // SplitJoin
  int split_u = -1, split_v = -1;  // in this node's piece indexing
  EdgeId virtual_even_id, virtual_odd_id;  // ids used in the children
  std::vector<std::unique_ptr<DecompositionNode>> children;
};

/// Decomposition of a connected odd-K4 minor free signed graph along cut
/// vertices and strong 2-splits (Lovasz-Schrijver trichotomy). Throws
/// std::runtime_error if some piece admits neither a split nor a leaf
/// classification (i.e. the input was not odd-K4 minor free).
std::unique_ptr<DecompositionNode> decompose(const SignedGraph& g);

}  // namespace sgc

#endif
