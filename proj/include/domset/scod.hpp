#ifndef DOMSET_SCOD_HPP
#define DOMSET_SCOD_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "domset/core.hpp"
#include "domset/dynamics.hpp"

namespace domset {

/// S(i,j) = w(i) w(j) A(i,j), where w(i) averages the N largest off-diagonal
/// entries of row i and N = max(1, round(neighbor_fraction * n)), capped at n-1.
AffinityMatrix learn_robust_affinity(const AffinityMatrix& A, double neighbor_fraction);

/// x'Ax at the barycenter, i.e. the mean of all entries.
double global_cohesiveness(const AffinityMatrix& A);

/// Off-diagonal exp(-D_ij / (2 sigma^2)). Without sigma, the median
/// off-diagonal entry of D is used.
AffinityMatrix gaussian_affinity(const Eigen::MatrixXd& D, std::optional<double> sigma = {});

enum class GateMode {
  /// Cohesiveness in A beats GC(A) and cohesiveness in S beats GC(S).
  PerMatrix,
  /// Both cohesiveness values beat GC(A).
  Literal,
};

const char* to_string(GateMode m);
GateMode parse_gate(const std::string& name);

struct ScodConfig {
  double neighbor_fraction = 0.10;
  Solver solver = Solver::InImDyn;
  SolverConfig solver_cfg{};
  std::uint64_t seed = 0;
  GateMode gate = GateMode::PerMatrix;

  void validate() const;
};

struct ScodResult {
  std::vector<Cluster> clusters;
  std::vector<IndexSet> outlier_sets;
  /// GC of the input affinity.
  double global_cohesiveness = 0.0;
  /// GC of the learned affinity S.
  double learned_global_cohesiveness = 0.0;
  /// Cohesiveness of each cluster under S, parallel to clusters.
  std::vector<double> learned_cohesiveness;

  IndexSet outliers() const;
  /// Cluster id per vertex, -1 for outliers.
  std::vector<Index> labels(Index n) const;
};

ScodResult scod(const AffinityMatrix& A, const ScodConfig& cfg = {});

}  // namespace domset

#endif  // DOMSET_SCOD_HPP
