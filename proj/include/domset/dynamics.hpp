#ifndef DOMSET_DYNAMICS_HPP
#define DOMSET_DYNAMICS_HPP

#include <optional>

#include "domset/core.hpp"

namespace domset {

struct SolverConfig {
  /// Bound on the step change and on sqrt(epsilon); epsilon is a sum of
  /// squares, so it is compared against tolerance^2.
  double tolerance = 1e-10;
  Index max_iterations = 10'000;
  /// Support threshold relative to the largest component.
  double zero_tol = 1e-6;

  void validate() const;
};

struct FixedPointResult {
  SimplexVector x;
  double objective = 0.0;
  Index iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

enum class Solver { Replicator, InImDyn };

const char* to_string(Solver s);
Solver parse_solver(const std::string& name);

/// Payoff matrix of the form  base + diag(shift) + offset * ones * ones^T,
/// applied without materializing the n x n sum. Penalized constrained programs
/// differ from the affinity only on the diagonal, and replicator dynamics on
/// a payoff with negative entries needs a constant offset.
class Payoff {
 public:
  explicit Payoff(const Eigen::MatrixXd& base) : base_(&base) {}
  Payoff(const Eigen::MatrixXd& base, Eigen::VectorXd diag_shift, double offset = 0.0);
  // Only a pointer to the base is kept.
  explicit Payoff(Eigen::MatrixXd&&) = delete;
  Payoff(Eigen::MatrixXd&&, Eigen::VectorXd, double = 0.0) = delete;

  Index size() const noexcept { return base_->rows(); }
  const Eigen::MatrixXd& base() const noexcept { return *base_; }
  double entry(Index i, Index j) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// out = a * out + b * B e_i
  void blend_column(Index i, double a, double b, Eigen::VectorXd& out) const;
  double min_entry() const;
  Eigen::MatrixXd dense() const;

 private:
  const Eigen::MatrixXd* base_;
  Eigen::VectorXd shift_;
  double offset_ = 0.0;
};

/// One discrete replicator update x_i <- x_i (Bx)_i / x'Bx.
SimplexVector replicator_step(const Payoff& B, const SimplexVector& x);
inline SimplexVector replicator_step(const AffinityMatrix& A, const SimplexVector& x) {
  return replicator_step(Payoff(A.values()), x);
}

/// Iterates replicator_step until epsilon <= tolerance^2, or until the
/// infinity-norm change is <= tolerance while epsilon <= tolerance. Requires a
/// nonnegative payoff.
FixedPointResult run_replicator(const Payoff& B, const SimplexVector& x0, const SolverConfig& cfg);
inline FixedPointResult run_replicator(const AffinityMatrix& A, const SimplexVector& x0,
                                       const SolverConfig& cfg = {}) {
  return run_replicator(Payoff(A.values()), x0, cfg);
}

/// Nash error  sum_i min{x_i, x'Bx - (Bx)_i}^2 ; zero exactly at equilibria of
/// the symmetric game with payoff B.
double epsilon(const Payoff& B, const SimplexVector& x);
inline double epsilon(const Eigen::MatrixXd& B, const SimplexVector& x) {
  return epsilon(Payoff(B), x);
}
inline double epsilon(const AffinityMatrix& A, const SimplexVector& x) {
  return epsilon(A.values(), x);
}

/// Pure strategy e_i maximizing (Bx)_i - x'Bx when that gain is positive.
std::optional<Index> select_infective(const Eigen::MatrixXd& B, const SimplexVector& x);

/// One infection/immunization step. Returns x unchanged at an equilibrium.
SimplexVector inimdyn_step(const Payoff& B, const SimplexVector& x);

/// Infection-immunization dynamics, stopping once epsilon(x) <= cfg.tolerance^2.
FixedPointResult inimdyn(const Payoff& B, const SimplexVector& x0, const SolverConfig& cfg);
inline FixedPointResult inimdyn(const Eigen::MatrixXd& B, const SimplexVector& x0,
                                const SolverConfig& cfg = {}) {
  return inimdyn(Payoff(B), x0, cfg);
}
inline FixedPointResult inimdyn(const AffinityMatrix& A, const SimplexVector& x0,
                                const SolverConfig& cfg = {}) {
  return inimdyn(A.values(), x0, cfg);
}

FixedPointResult solve(const Payoff& B, const SimplexVector& x0, Solver solver,
                       const SolverConfig& cfg);

}  // namespace domset

#endif  // DOMSET_DYNAMICS_HPP
