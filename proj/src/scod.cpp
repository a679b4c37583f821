#include "domset/scod.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace domset {

AffinityMatrix learn_robust_affinity(const AffinityMatrix& A, double neighbor_fraction) {
  if (!(neighbor_fraction > 0.0 && neighbor_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "neighbor fraction must lie in (0, 1]");
  const Index n = A.size();
  if (n <= 1) return A;
  const Index N = std::min<Index>(
      n - 1, std::max<Index>(1, static_cast<Index>(std::llround(neighbor_fraction * n))));
  Eigen::VectorXd w(n);
  std::vector<double> row;
  for (Index i = 0; i < n; ++i) {
    row.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) row.push_back(A(i, j));
    std::nth_element(row.begin(), row.begin() + (N - 1), row.end(), std::greater<>());
    double s = 0.0;
    for (Index k = 0; k < N; ++k) s += row[k];
    w(i) = s / static_cast<double>(N);
  }
  Eigen::MatrixXd S = w.asDiagonal() * A.values() * w.asDiagonal();
  // Exact symmetry regardless of evaluation order.
  S = 0.5 * (S + S.transpose()).eval();
  S.diagonal().setZero();
  return make_trusted_affinity(std::move(S));
}

double global_cohesiveness(const AffinityMatrix& A) {
  if (A.size() == 0) throw Error(ErrorCode::ZeroSize, "empty graph");
  return quadratic_value(A, barycenter(A.size()));
}

AffinityMatrix gaussian_affinity(const Eigen::MatrixXd& D, std::optional<double> sigma) {
  const Index n = D.rows();
  if (D.cols() != n) throw Error(ErrorCode::NonSquare, "distance matrix is not square");
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double d = D(i, j);
      if (!std::isfinite(d))
        throw Error(ErrorCode::NonFinite, "distance (row " + std::to_string(i) + ", column " +
                                              std::to_string(j) + ") is not finite");
      if (d < 0.0)
        throw Error(ErrorCode::NegativeWeight, "negative distance at (row " + std::to_string(i) +
                                                   ", column " + std::to_string(j) + ")");
    }
  double s;
  if (sigma) {
    s = *sigma;
  } else {
    std::vector<double> off;
    off.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < j; ++i) off.push_back(D(i, j));
    if (off.empty()) throw Error(ErrorCode::DegenerateSigma, "no pairwise distances");
    const std::size_t mid = off.size() / 2;
    std::nth_element(off.begin(), off.begin() + mid, off.end());
    s = off[mid];
    if (off.size() % 2 == 0) {
      const double lower = *std::max_element(off.begin(), off.begin() + mid);
      s = 0.5 * (s + lower);
    }
  }
  if (!(s > 0.0) || !std::isfinite(s))
    throw Error(ErrorCode::DegenerateSigma, "sigma must be positive (all points identical?)");
  const double scale = -1.0 / (2.0 * s * s);
  Eigen::MatrixXd M = (0.5 * (D + D.transpose()) * scale).array().exp();
  M.diagonal().setZero();
  return make_trusted_affinity(std::move(M));
}

const char* to_string(GateMode m) { return m == GateMode::PerMatrix ? "per-matrix" : "literal"; }

GateMode parse_gate(const std::string& name) {
  if (name == "per-matrix") return GateMode::PerMatrix;
  if (name == "literal") return GateMode::Literal;
  throw Error(ErrorCode::InvalidArgument, "unknown gate mode '" + name + "'");
}

void ScodConfig::validate() const {
  if (!(neighbor_fraction > 0.0 && neighbor_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "neighbor fraction must lie in (0, 1]");
  solver_cfg.validate();
}

IndexSet ScodResult::outliers() const {
  IndexSet all;
  for (const auto& o : outlier_sets) all = all.united(o);
  return all;
}

std::vector<Index> ScodResult::labels(Index n) const {
  std::vector<Index> out(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (Index v : clusters[c].support) out[v] = static_cast<Index>(c);
  return out;
}

namespace {

// Strict gate; differences at rounding level count as ties, and ties are outliers.
bool exceeds(double value, double gate) {
  return value - gate > 1e-12 * std::max(1.0, std::abs(gate));
}

}  // namespace

ScodResult scod(const AffinityMatrix& A, const ScodConfig& cfg) {
  cfg.validate();
  ScodResult out;
  const Index n = A.size();
  if (n == 0) return out;
  const AffinityMatrix S = learn_robust_affinity(A, cfg.neighbor_fraction);
  out.global_cohesiveness = global_cohesiveness(A);
  out.learned_global_cohesiveness = global_cohesiveness(S);
  const double gate_a = out.global_cohesiveness;
  const double gate_s =
      cfg.gate == GateMode::PerMatrix ? out.learned_global_cohesiveness : out.global_cohesiveness;

  IndexSet remaining = IndexSet::range(n);
  std::uint64_t round = 0;
  while (!remaining.empty()) {
    const AffinityMatrix subA = A.restricted(remaining);
    if (remaining.size() == 1 || subA.all_zero()) {
      out.outlier_sets.push_back(remaining);
      break;
    }
    const FixedPointResult r = solve(Payoff(subA.values()),
                                     perturbed_barycenter(remaining.size(), cfg.seed + round++),
                                     cfg.solver, cfg.solver_cfg);
    const IndexSet local = relative_support(r.x.values(), cfg.solver_cfg.zero_tol);
    const SimplexVector xc(scatter(restrict_to(r.x.values(), local).values(), local,
                                   remaining.size()));
    const double ca = quadratic_value(subA.values(), xc.values());
    const double cs = quadratic_value(S.restricted(remaining).values(), xc.values());

    std::vector<Index> global;
    for (Index k : local) global.push_back(remaining[k]);
    IndexSet support(std::move(global));
    if (exceeds(ca, gate_a) && exceeds(cs, gate_s)) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (Index k = 0; k < remaining.size(); ++k) x(remaining[k]) = xc[k];
      out.clusters.push_back(Cluster{support, SimplexVector(std::move(x)), ca});
      out.learned_cohesiveness.push_back(cs);
    } else {
      out.outlier_sets.push_back(support);
    }
    remaining = remaining.minus(support);
  }
  return out;
}

}  // namespace domset
