#ifndef DOMSET_DSETS_HPP
#define DOMSET_DSETS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "domset/core.hpp"
#include "domset/dynamics.hpp"

namespace domset {

/// (1/|S|) sum_{j in S} a_ij
double weighted_degree(const AffinityMatrix& A, const IndexSet& S, Index i);

/// a_ij - weighted_degree(A, S, i)
double phi(const AffinityMatrix& A, const IndexSet& S, Index i, Index j);

/// Largest set accepted by node_weight and friends (the recursion visits every subset).
inline constexpr Index kMaxRecursionSize = 20;

/// w_S(i) by the subset recursion, memoized over the subsets of S.
double node_weight(const AffinityMatrix& A, const IndexSet& S, Index i);

/// W(S) = sum_{i in S} w_S(i)
double total_weight(const AffinityMatrix& A, const IndexSet& S);

struct DominantSetReport {
  IndexSet set;
  /// w_S(i) for the members of S, in member order.
  std::vector<double> internal_weights;
  /// (i, w_{S+i}(i)) for every outsider i.
  std::vector<std::pair<Index, double>> external_violations;
  bool is_dominant = false;
};

DominantSetReport is_dominant_set(const AffinityMatrix& A, const IndexSet& S);

/// w_S(i)/W(S) on S, zero elsewhere. Throws NotDominant unless S is dominant.
SimplexVector characteristic_vector(const AffinityMatrix& A, const IndexSet& S);

struct ExtractConfig {
  Solver solver = Solver::InImDyn;
  SolverConfig solver_cfg{};
  std::uint64_t seed = 0;
};

/// Runs the configured dynamics from a perturbed barycenter.
Cluster extract_dominant_set(const AffinityMatrix& A, const ExtractConfig& cfg = {});

struct PeelConfig {
  ExtractConfig extract{};
  Index min_cluster_size = 2;
  /// 0 means unbounded.
  Index max_clusters = 0;
};

struct PeelResult {
  /// Supports and characteristic vectors use the original vertex ids.
  std::vector<Cluster> clusters;
  IndexSet residual;
};

PeelResult peel_off_enumerate(const AffinityMatrix& A, const PeelConfig& cfg = {});

/// Every dominant set of A, by exhaustive search. Throws TooLarge for n > 15.
std::vector<IndexSet> brute_force_dominant_sets(const AffinityMatrix& A);

}  // namespace domset

#endif  // DOMSET_DSETS_HPP
