#include "domset/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace domset {

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (!(zero_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "zero_tol must be >= 0");
}

const char* to_string(Solver s) {
  return s == Solver::Replicator ? "replicator" : "inimdyn";
}

Solver parse_solver(const std::string& name) {
  if (name == "replicator") return Solver::Replicator;
  if (name == "inimdyn") return Solver::InImDyn;
  throw Error(ErrorCode::InvalidArgument, "unknown solver '" + name + "'");
}

// ---------------------------------------------------------------------------
// Payoff

Payoff::Payoff(const Eigen::MatrixXd& base, Eigen::VectorXd diag_shift, double offset)
    : base_(&base), shift_(std::move(diag_shift)), offset_(offset) {
  if (base.rows() != base.cols()) throw Error(ErrorCode::NonSquare, "payoff base");
  if (shift_.size() != 0 && shift_.size() != base.rows())
    throw Error(ErrorCode::DimensionMismatch, "payoff diagonal shift");
}

double Payoff::entry(Index i, Index j) const {
  double v = (*base_)(i, j) + offset_;
  if (i == j && shift_.size() != 0) v += shift_(i);
  return v;
}

Eigen::VectorXd Payoff::apply(const Eigen::VectorXd& x) const {
  if (x.size() != size()) throw Error(ErrorCode::DimensionMismatch, "payoff times vector");
  Eigen::VectorXd g = (*base_) * x;
  if (shift_.size() != 0) g += shift_.cwiseProduct(x);
  if (offset_ != 0.0) g.array() += offset_ * x.sum();
  return g;
}

void Payoff::blend_column(Index i, double a, double b, Eigen::VectorXd& out) const {
  out = a * out + b * base_->col(i);
  if (shift_.size() != 0) out(i) += b * shift_(i);
  if (offset_ != 0.0) out.array() += b * offset_;
}

double Payoff::min_entry() const {
  if (size() == 0) return 0.0;
  double m = base_->minCoeff();
  if (shift_.size() != 0) {
    for (Index i = 0; i < size(); ++i) m = std::min(m, (*base_)(i, i) + shift_(i));
  }
  return m + offset_;
}

Eigen::MatrixXd Payoff::dense() const {
  Eigen::MatrixXd B = base_->array() + offset_;
  if (shift_.size() != 0) B.diagonal() += shift_;
  return B;
}

namespace {

void check_start(const Payoff& B, const SimplexVector& x) {
  if (x.size() != B.size())
    throw Error(ErrorCode::DimensionMismatch, "start vector length differs from payoff size");
}

double nash_error(const Eigen::VectorXd& x, const Eigen::VectorXd& g, double pi) {
  double e = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double m = std::min(x(i), pi - g(i));
    e += m * m;
  }
  return e;
}

// Keeps x on the simplex after floating-point drift.
void renormalize(Eigen::VectorXd& x) {
  x = x.cwiseMax(0.0);
  x /= x.sum();
}

/// Incremental InImDyn state: x, g = Bx and pi = x'g, updated in O(n) per step.
class InfectionState {
 public:
  InfectionState(const Payoff& B, Eigen::VectorXd x) : B_(B), x_(std::move(x)) { refresh(); }

  void refresh() {
    renormalize(x_);
    g_ = B_.apply(x_);
    pi_ = x_.dot(g_);
  }

  double error() const { return nash_error(x_, g_, pi_); }

  /// Returns false when no strategy is infective or unfit.
  bool step() {
    const Index n = x_.size();
    Index best_pure = -1, best_co = -1;
    double pure_gain = 0.0, co_gain = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double r = g_(i) - pi_;
      if (r > pure_gain) {
        pure_gain = r;
        best_pure = i;
      }
      if (x_(i) > 0.0 && x_(i) < 1.0 && -r > co_gain) {
        co_gain = -r;
        best_co = i;
      }
    }
    if (best_pure < 0 && best_co < 0) return false;

    if (best_pure >= 0 && pure_gain >= co_gain) {
      const Index i = best_pure;
      const double num = pure_gain;
      const double den = B_.entry(i, i) - 2.0 * g_(i) + pi_;
      const double delta = den < 0.0 ? std::min(num / -den, 1.0) : 1.0;
      x_ *= (1.0 - delta);
      x_(i) += delta;
      B_.blend_column(i, 1.0 - delta, delta, g_);
      pi_ += 2.0 * delta * num + delta * delta * den;
    } else {
      const Index j = best_co;
      const double mu = x_(j) / (1.0 - x_(j));
      const double num = mu * co_gain;
      const double den = mu * mu * (pi_ - 2.0 * g_(j) + B_.entry(j, j));
      const double delta = den < 0.0 ? std::min(num / -den, 1.0) : 1.0;
      const double t = delta * mu;
      x_ *= (1.0 + t);
      x_(j) -= t;
      if (delta == 1.0) x_(j) = 0.0;
      B_.blend_column(j, 1.0 + t, -t, g_);
      pi_ += 2.0 * delta * num + delta * delta * den;
    }
    for (Index i = 0; i < n; ++i)
      if (x_(i) < 0.0) x_(i) = 0.0;
    return true;
  }

  const Eigen::VectorXd& x() const { return x_; }

 private:
  const Payoff& B_;
  Eigen::VectorXd x_;
  Eigen::VectorXd g_;
  double pi_ = 0.0;
};

FixedPointResult finish(const Payoff& B, Eigen::VectorXd x, Index iterations, bool converged,
                        double residual) {
  renormalize(x);
  FixedPointResult r;
  r.x = SimplexVector(std::move(x));
  r.objective = r.x.values().dot(B.apply(r.x.values()));
  r.iterations = iterations;
  r.converged = converged;
  r.residual = residual;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Replicator dynamics

SimplexVector replicator_step(const Payoff& B, const SimplexVector& x) {
  check_start(B, x);
  const Eigen::VectorXd g = B.apply(x.values());
  const double pi = x.values().dot(g);
  if (!(pi > 0.0))
    throw Error(ErrorCode::ZeroDenominator, "x'Bx is not positive; replicator step undefined");
  Eigen::VectorXd next = x.values().cwiseProduct(g) / pi;
  renormalize(next);
  return SimplexVector(std::move(next));
}

FixedPointResult run_replicator(const Payoff& B, const SimplexVector& x0, const SolverConfig& cfg) {
  cfg.validate();
  check_start(B, x0);
  const double eps_tol = cfg.tolerance * cfg.tolerance;
  Eigen::VectorXd x = x0.values();
  double change = std::numeric_limits<double>::infinity();
  double err = change;
  for (Index it = 0; it <= cfg.max_iterations; ++it) {
    const Eigen::VectorXd g = B.apply(x);
    const double pi = x.dot(g);
    err = nash_error(x, g, pi);
    if (err <= eps_tol) return finish(B, std::move(x), it, true, err);
    // A stalled step only counts when no outsider is still clearly infective;
    // a nearly extinct infective strategy regrows too slowly to move x.
    if (change <= cfg.tolerance && err <= cfg.tolerance)
      return finish(B, std::move(x), it, true, change);
    if (it == cfg.max_iterations) break;
    if (!(pi > 0.0))
      throw Error(ErrorCode::ZeroDenominator, "x'Bx is not positive; replicator step undefined");
    Eigen::VectorXd next = x.cwiseProduct(g) / pi;
    renormalize(next);
    change = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
  }
  return finish(B, std::move(x), cfg.max_iterations, false, std::min(err, change));
}

// ---------------------------------------------------------------------------
// Infection-immunization dynamics

double epsilon(const Payoff& B, const SimplexVector& x) {
  check_start(B, x);
  const Eigen::VectorXd g = B.apply(x.values());
  return nash_error(x.values(), g, x.values().dot(g));
}

std::optional<Index> select_infective(const Eigen::MatrixXd& B, const SimplexVector& x) {
  if (B.rows() != B.cols() || B.rows() != x.size())
    throw Error(ErrorCode::DimensionMismatch, "select_infective");
  const Eigen::VectorXd g = B * x.values();
  const double pi = x.values().dot(g);
  // Gains at the level of rounding noise are treated as zero.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, B.cwiseAbs().maxCoeff());
  std::optional<Index> best;
  double best_gain = noise;
  for (Index i = 0; i < g.size(); ++i) {
    if (g(i) - pi > best_gain) {
      best_gain = g(i) - pi;
      best = i;
    }
  }
  return best;
}

SimplexVector inimdyn_step(const Payoff& B, const SimplexVector& x) {
  check_start(B, x);
  InfectionState state(B, x.values());
  state.step();
  Eigen::VectorXd next = state.x();
  renormalize(next);
  return SimplexVector(std::move(next));
}

FixedPointResult inimdyn(const Payoff& B, const SimplexVector& x0, const SolverConfig& cfg) {
  cfg.validate();
  check_start(B, x0);
  const double eps_tol = cfg.tolerance * cfg.tolerance;
  const Index refresh_every = std::max<Index>(B.size(), 64);
  InfectionState state(B, x0.values());
  double err = state.error();
  for (Index it = 0; it < cfg.max_iterations; ++it) {
    if (err <= eps_tol) {
      // Confirm against a freshly computed payoff vector before accepting.
      state.refresh();
      err = state.error();
      if (err <= eps_tol) return finish(B, state.x(), it, true, err);
    }
    if (!state.step()) return finish(B, state.x(), it, err <= eps_tol, err);
    if ((it + 1) % refresh_every == 0) state.refresh();
    err = state.error();
  }
  state.refresh();
  err = state.error();
  return finish(B, state.x(), cfg.max_iterations, err <= eps_tol, err);
}

FixedPointResult solve(const Payoff& B, const SimplexVector& x0, Solver solver,
                       const SolverConfig& cfg) {
  if (solver == Solver::InImDyn) return inimdyn(B, x0, cfg);
  const double lowest = B.min_entry();
  if (lowest >= 0.0) return run_replicator(B, x0, cfg);
  // x'(B + c ee')x = x'Bx + c on the simplex, so the shift leaves the
  // maximizers unchanged while making the payoff nonnegative.
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(B.size());
  for (Index i = 0; i < B.size(); ++i) shift(i) = B.entry(i, i) - B.base()(i, i);
  const double offset = B.entry(0, 0) - B.base()(0, 0) - shift(0) - lowest;
  Payoff shifted(B.base(), std::move(shift), offset);
  FixedPointResult r = run_replicator(shifted, x0, cfg);
  r.objective = r.x.values().dot(B.apply(r.x.values()));
  return r;
}

}  // namespace domset
