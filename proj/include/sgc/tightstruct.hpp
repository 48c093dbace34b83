#ifndef SGC_TIGHTSTRUCT_HPP
#define SGC_TIGHTSTRUCT_HPP

#include "sgc/metpoly.hpp"

namespace sgc {

struct TightCycleSet {
  std::vector<std::vector<EdgeId>> cycles;  // simple odd cycles with val ~ 1
};

/// All simple odd cycles with val <= 1 + tol (requires x in MET, where val is
/// also >= 1 - tol). Throws if more than cap are found.
TightCycleSet enumerate_tight_cycles(const SignedGraph& g, const MetricVector& x,
                                     double tol = kTolX, int cap = 10000);

struct Hypergraph {
  int n = 0;                        // ambient vertex count
  std::vector<std::set<int>> edges; // pairwise intersections of size <= 1 after merge
};

/// Vertex sets of the tight cycles, merged while any two share >= 2 vertices.
/// The result is independent of merge order.
Hypergraph build_hypergraph(const SignedGraph& g, const TightCycleSet& cycles);

enum class HypergraphClass { SingleVertex, SpanningHyperedge, Triangle, Other };

HypergraphClass classify_hypergraph(const Hypergraph& h);

struct HypergraphStructure {
  bool acyclic = true;            // vertex-hyperedge incidence graph is a forest
  int components = 0;             // incidence components plus isolated vertices
  std::vector<int> cut_vertices;  // vertices in >= 2 hyperedges
  // per cut vertex: the sub-hypergraphs hanging at it (each keeps the vertex)
  std::map<int, std::vector<Hypergraph>> fractions;
};

HypergraphStructure hypergraph_structure(const Hypergraph& h);

struct ReducedInstance {
  SignedGraph graph;
  EdgeWeights c;                 // nondegenerate weights on the reduced graph
  std::vector<int> vertex_map;   // original vertex -> reduced vertex
  std::vector<double> sign;      // +-1 per original vertex (resigning log)
};

/// Eliminates degenerate edges: odd edges with c = -1 are resigned to even,
/// even edges with c = 1 are contracted. A point map for the original graph
/// is p(v) = sign[v] * p_reduced(vertex_map[v]).
ReducedInstance degenerate_reduce(const SignedGraph& g, const EdgeWeights& c,
                                  double tol = kTolX);

}  // namespace sgc

#endif
