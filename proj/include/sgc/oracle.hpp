#ifndef SGC_ORACLE_HPP
#define SGC_ORACLE_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "sgc/metpoly.hpp"

namespace sgc {

/// Brute-force MET membership: enumerate all simple odd cycles and check
/// val >= 1 - tol. Independent of the per-edge shortest path engine.
bool met_oracle(const SignedGraph& g, const MetricVector& x, double tol = kTolX,
                int max_cycles = 100000);

struct FeasibilityResult {
  bool found = false;       // best_residual <= 1e-9
  double best_residual = 0; // max constraint violation of the best point
  Eigen::MatrixXd P;        // d x n, unit columns
  Eigen::MatrixXd X;        // Gram of the best point
};

/// Multi-start projected gradient descent over unit vectors in dimension d
/// (default n, so rank is unrestricted). Deterministic given the seed.
FeasibilityResult feasibility_oracle(const SignedGraph& g, const EdgeWeights& c, int d = -1,
                                     int restarts = 64, int iters = 5000,
                                     std::uint64_t seed = 0);

struct UniquenessResult {
  bool found_two = false;
  Eigen::MatrixXd X1, X2;  // differ by > 1e-6 entrywise when found_two
};

/// Maximizes random linear functionals over the feasible region; one-sided
/// (can only prove non-uniqueness). Throws if no feasible point is found.
UniquenessResult uniqueness_oracle(const SignedGraph& g, const EdgeWeights& c, int trials = 32,
                                   std::uint64_t seed = 0);

enum class InstanceKind { K32Free, WithK32Leaves, WithSplits };

struct GeneratedInstance {
  SignedGraph graph;
  EdgeWeights c;
};

/// Random odd-K4 minor free instance with arccos(c)/pi inside MET, built from
/// small certified blocks joined at cut vertices or by strong 2-splits.
GeneratedInstance generate_instance(std::uint64_t seed, int size, InstanceKind kind);

}  // namespace sgc

#endif
