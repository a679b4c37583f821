#ifndef DOMSET_CDSC_HPP
#define DOMSET_CDSC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "domset/core.hpp"
#include "domset/dynamics.hpp"

namespace domset {

/// The penalized program  max x'(A - alpha I_Q)x  over the simplex, where the
/// diagonal penalty sits on the vertices outside the constraint set Q.
class ConstrainedProgram {
 public:
  ConstrainedProgram(const AffinityMatrix& A, IndexSet Q, double alpha);
  // Only a pointer to A is kept.
  ConstrainedProgram(AffinityMatrix&&, IndexSet, double) = delete;

  const AffinityMatrix& affinity() const noexcept { return *A_; }
  const IndexSet& constraints() const noexcept { return Q_; }
  double alpha() const noexcept { return alpha_; }

  /// -alpha on V \ Q, zero on Q.
  const Eigen::VectorXd& penalty() const noexcept { return penalty_; }
  Payoff payoff() const { return Payoff(A_->values(), penalty_); }

 private:
  const AffinityMatrix* A_;
  IndexSet Q_;
  double alpha_;
  Eigen::VectorXd penalty_;
};

struct ConstrainedCluster {
  IndexSet support;
  SimplexVector memberships;
  IndexSet satisfied_constraints;
  double objective = 0.0;
  double alpha = 0.0;
};

enum class AlphaMode { Eigen, MaxDegree };

const char* to_string(AlphaMode m);

/// eigen: largest eigenvalue of A restricted to V \ Q. max_degree: largest row
/// sum of that submatrix. Zero when Q = V.
double alpha_lower_bound(const AffinityMatrix& A, const IndexSet& Q, AlphaMode mode);

struct AlphaPolicy {
  AlphaMode mode = AlphaMode::MaxDegree;
  double margin = 1.01;
  /// When set, used as is.
  std::optional<double> fixed;
};

/// margin * bound, or margin itself when the bound is zero.
double choose_alpha(const AffinityMatrix& A, const IndexSet& Q, const AlphaPolicy& policy);

struct CdscConfig {
  Solver solver = Solver::InImDyn;
  SolverConfig solver_cfg{};
  std::uint64_t seed = 0;
};

/// Start point on the face of the simplex spanned by Q (see solve_cdsc).
SimplexVector face_start(Index n, const IndexSet& Q, Solver solver, std::uint64_t seed);

/// Solves the program from face_start. Throws ConstraintUnsatisfied when the
/// support misses Q.
ConstrainedCluster solve_cdsc(const ConstrainedProgram& prog, const CdscConfig& cfg = {});

struct EnumerateConfig {
  CdscConfig cdsc{};
  AlphaPolicy alpha{};
};

/// Shrinks the constraint set from V by each extracted support until empty.
/// Vertices stay in the graph, so supports may overlap.
std::vector<ConstrainedCluster> enumerate_all_constrained(const AffinityMatrix& A,
                                                          const EnumerateConfig& cfg = {});

/// Vertex j goes to the cluster maximizing |support| * membership_j; ties go
/// to the lowest cluster id.
std::vector<Index> resolve_overlaps(const std::vector<ConstrainedCluster>& clusters);

/// First-order conditions: payoff equal to x'Bx on the support (entries above
/// tol), at most x'Bx elsewhere, all within tol.
bool kkt_check(const ConstrainedProgram& prog, const SimplexVector& x, double tol);

/// Outsider i with (Ax)_i > x'Bx + margin maximizing the left side, if any.
std::optional<Index> find_dominant_distribution(const ConstrainedProgram& prog,
                                                const SimplexVector& x, double margin = 0.0);

struct FastCdscConfig {
  SolverConfig solver_cfg{};
  std::uint64_t seed = 0;
  AlphaPolicy alpha{};
  Index max_outer_iterations = 10'000;
};

struct FastCdscResult {
  ConstrainedCluster cluster;
  /// Working subgraph size per outer iteration.
  std::vector<Index> subgraph_sizes;
  Index outer_iterations = 0;
};

/// Localized solver: grows a working subgraph from the face of Q, adding one
/// dominant distribution per outer iteration and re-solving only on it.
FastCdscResult fast_cdsc(const AffinityMatrix& A, const IndexSet& Q, const FastCdscConfig& cfg = {});

}  // namespace domset

#endif  // DOMSET_CDSC_HPP
