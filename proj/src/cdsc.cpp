#include "domset/cdsc.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "domset/random.hpp"

namespace domset {

namespace {

void check_constraints(const AffinityMatrix& A, const IndexSet& Q) {
  if (Q.empty()) throw Error(ErrorCode::EmptySet, "constraint set is empty");
  for (Index q : Q)
    if (q < 0 || q >= A.size())
      throw Error(ErrorCode::OutOfRange, "constraint vertex " + std::to_string(q) +
                                             " outside graph of size " + std::to_string(A.size()));
}

std::string alpha_text(double alpha) {
  std::ostringstream os;
  os.precision(17);
  os << alpha;
  return os.str();
}

ConstrainedCluster make_cluster(const ConstrainedProgram& prog, const Eigen::VectorXd& x,
                                double zero_tol) {
  ConstrainedCluster c;
  c.support = relative_support(x, zero_tol);
  c.memberships =
      SimplexVector(scatter(restrict_to(x, c.support).values(), c.support, prog.affinity().size()));
  c.satisfied_constraints = c.support.intersected(prog.constraints());
  c.objective = c.memberships.values().dot(prog.payoff().apply(c.memberships.values()));
  c.alpha = prog.alpha();
  if (c.satisfied_constraints.empty())
    throw Error(ErrorCode::ConstraintUnsatisfied,
                "support misses the constraint set with alpha = " + alpha_text(prog.alpha()));
  return c;
}

}  // namespace

ConstrainedProgram::ConstrainedProgram(const AffinityMatrix& A, IndexSet Q, double alpha)
    : A_(&A), Q_(std::move(Q)), alpha_(alpha) {
  check_constraints(A, Q_);
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw Error(ErrorCode::InvalidArgument, "alpha must be positive and finite");
  penalty_ = Eigen::VectorXd::Constant(A.size(), -alpha_);
  for (Index q : Q_) penalty_(q) = 0.0;
}

const char* to_string(AlphaMode m) { return m == AlphaMode::Eigen ? "eigen" : "max_degree"; }

double alpha_lower_bound(const AffinityMatrix& A, const IndexSet& Q, AlphaMode mode) {
  const IndexSet rest = Q.complement(A.size());
  if (rest.empty()) return 0.0;
  if (mode == AlphaMode::MaxDegree) {
    double best = 0.0;
    for (Index i : rest) {
      double s = 0.0;
      for (Index j : rest) s += A(i, j);
      best = std::max(best, s);
    }
    return best;
  }
  const Eigen::MatrixXd sub = principal_submatrix(A.values(), rest);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Internal, "eigensolver failed");
  return es.eigenvalues().maxCoeff();
}

double choose_alpha(const AffinityMatrix& A, const IndexSet& Q, const AlphaPolicy& policy) {
  if (policy.fixed) return *policy.fixed;
  const double bound = alpha_lower_bound(A, Q, policy.mode);
  return bound > 0.0 ? policy.margin * bound : policy.margin;
}

SimplexVector face_start(Index n, const IndexSet& Q, Solver solver, std::uint64_t seed) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Index q : Q) x(q) = 1.0 + 1e-4 * hash_unit(seed, static_cast<std::uint64_t>(q));
  x /= x.sum();
  const Index outside = n - Q.size();
  if (solver == Solver::Replicator && outside > 0) {
    // Multiplicative updates never revive a zero component.
    x *= 1.0 - 1e-4;
    for (Index i = 0; i < n; ++i)
      if (!Q.contains(i)) x(i) = 1e-4 / static_cast<double>(outside);
  }
  return SimplexVector::normalized(std::move(x));
}

ConstrainedCluster solve_cdsc(const ConstrainedProgram& prog, const CdscConfig& cfg) {
  const Payoff B = prog.payoff();
  const SimplexVector x0 =
      face_start(prog.affinity().size(), prog.constraints(), cfg.solver, cfg.seed);
  const FixedPointResult r = solve(B, x0, cfg.solver, cfg.solver_cfg);
  return make_cluster(prog, r.x.values(), cfg.solver_cfg.zero_tol);
}

std::vector<ConstrainedCluster> enumerate_all_constrained(const AffinityMatrix& A,
                                                          const EnumerateConfig& cfg) {
  std::vector<ConstrainedCluster> out;
  IndexSet Q = IndexSet::range(A.size());
  std::uint64_t round = 0;
  while (!Q.empty()) {
    const ConstrainedProgram prog(A, Q, choose_alpha(A, Q, cfg.alpha));
    CdscConfig c = cfg.cdsc;
    c.seed = cfg.cdsc.seed + round++;
    ConstrainedCluster cl = solve_cdsc(prog, c);
    Q = Q.minus(cl.support);
    out.push_back(std::move(cl));
  }
  return out;
}

std::vector<Index> resolve_overlaps(const std::vector<ConstrainedCluster>& clusters) {
  if (clusters.empty()) return {};
  const Index n = clusters.front().memberships.size();
  std::vector<Index> assign(static_cast<std::size_t>(n), -1);
  std::vector<double> best(static_cast<std::size_t>(n), -1.0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    if (cl.memberships.size() != n)
      throw Error(ErrorCode::DimensionMismatch, "clusters disagree on vertex count");
    const double size = static_cast<double>(cl.support.size());
    for (Index j : cl.support) {
      const double score = size * cl.memberships[j];
      if (score > best[j]) {
        best[j] = score;
        assign[j] = static_cast<Index>(c);
      }
    }
  }
  for (Index j = 0; j < n; ++j)
    if (assign[j] < 0)
      throw Error(ErrorCode::UnassignedVertex, "vertex " + std::to_string(j) + " is in no cluster");
  return assign;
}

bool kkt_check(const ConstrainedProgram& prog, const SimplexVector& x, double tol) {
  const Payoff B = prog.payoff();
  const Eigen::VectorXd g = B.apply(x.values());
  const double half_lambda = x.values().dot(g);
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] > tol) {
      if (std::abs(g(i) - half_lambda) > tol) return false;
    } else if (g(i) > half_lambda + tol) {
      return false;
    }
  }
  return true;
}

std::optional<Index> find_dominant_distribution(const ConstrainedProgram& prog,
                                                const SimplexVector& x, double margin) {
  const Eigen::VectorXd g = prog.affinity().values() * x.values();
  const double rhs =
      x.values().dot(g) + x.values().cwiseAbs2().dot(prog.penalty());
  std::optional<Index> best;
  double best_val = rhs + margin;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) continue;
    if (g(i) > best_val) {
      best_val = g(i);
      best = i;
    }
  }
  return best;
}

FastCdscResult fast_cdsc(const AffinityMatrix& A, const IndexSet& Q, const FastCdscConfig& cfg) {
  check_constraints(A, Q);
  cfg.solver_cfg.validate();
  const Index n = A.size();
  const ConstrainedProgram prog(A, Q, choose_alpha(A, Q, cfg.alpha));
  const double margin = cfg.solver_cfg.tolerance;

  Eigen::VectorXd x = face_start(n, Q, Solver::InImDyn, cfg.seed).values();
  FastCdscResult out;
  while (out.outer_iterations < cfg.max_outer_iterations) {
    // Mass below the support threshold is dropped so that H stays local.
    const IndexSet kept = relative_support(x, cfg.solver_cfg.zero_tol);
    x = scatter(restrict_to(x, kept).values(), kept, n);
    std::vector<Index> sigma = kept.members();

    // g = A x from the support columns only; pi = x'(A - alpha I_Q)x.
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    for (Index j : sigma) g += x(j) * A.values().col(j);
    double pi = 0.0;
    for (Index j : sigma) pi += x(j) * (g(j) + prog.penalty()(j) * x(j));

    Index violator = -1;
    double best = pi + margin;
    for (Index i = 0; i < n; ++i) {
      if (x(i) > 0.0) continue;
      if (g(i) > best) {
        best = g(i);
        violator = i;
      }
    }
    if (violator < 0) break;

    sigma.push_back(violator);
    const IndexSet H = IndexSet(std::move(sigma)).united(Q);
    out.subgraph_sizes.push_back(H.size());
    ++out.outer_iterations;

    const Eigen::MatrixXd AH = principal_submatrix(A.values(), H);
    Eigen::VectorXd shift(H.size());
    for (Index k = 0; k < H.size(); ++k) shift(k) = prog.penalty()(H[k]);
    const Payoff BH(AH, std::move(shift));
    Eigen::VectorXd xh(H.size());
    for (Index k = 0; k < H.size(); ++k) xh(k) = x(H[k]);
    const FixedPointResult r =
        inimdyn(BH, SimplexVector::normalized(std::move(xh)), cfg.solver_cfg);
    x = scatter(r.x.values(), H, n);
  }
  out.cluster = make_cluster(prog, x, cfg.solver_cfg.zero_tol);
  return out;
}

}  // namespace domset
