#include "domset/dsets.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace domset {

namespace {

void check_set(const AffinityMatrix& A, const IndexSet& S) {
  if (S.empty()) throw Error(ErrorCode::EmptySet, "vertex set is empty");
  for (Index v : S)
    if (v < 0 || v >= A.size())
      throw Error(ErrorCode::OutOfRange, "vertex " + std::to_string(v) + " outside graph of size " +
                                             std::to_string(A.size()));
}

// w_T(i) for every subset T of a small vertex list, stored compactly: the
// weights of T occupy popcount(T) consecutive slots starting at offset[T].
class WeightTable {
 public:
  WeightTable(const AffinityMatrix& A, std::vector<Index> verts) : verts_(std::move(verts)) {
    const Index t = static_cast<Index>(verts_.size());
    if (t > kMaxRecursionSize)
      throw Error(ErrorCode::TooLarge, "weight recursion limited to " +
                                           std::to_string(kMaxRecursionSize) + " vertices");
    const std::uint32_t full = (std::uint32_t{1} << t);
    offset_.resize(full + 1);
    offset_[0] = 0;
    for (std::uint32_t m = 0; m < full; ++m) offset_[m + 1] = offset_[m] + std::popcount(m);
    w_.resize(offset_[full]);

    Eigen::MatrixXd a(t, t);
    for (Index r = 0; r < t; ++r)
      for (Index c = 0; c < t; ++c) a(r, c) = A(verts_[r], verts_[c]);

    std::vector<double> rs(static_cast<std::size_t>(t));
    for (std::uint32_t m = 1; m < full; ++m) {
      const int size = std::popcount(m);
      if (size == 1) {
        w_[offset_[m]] = 1.0;
        continue;
      }
      for (Index j = 0; j < t; ++j) {
        if (!(m >> j & 1u)) continue;
        double s = 0.0;
        for (Index k = 0; k < t; ++k)
          if (m >> k & 1u) s += a(j, k);
        rs[j] = s;
      }
      std::size_t slot = offset_[m];
      for (Index i = 0; i < t; ++i) {
        if (!(m >> i & 1u)) continue;
        const std::uint32_t sub = m ^ (std::uint32_t{1} << i);
        double acc = 0.0;
        for (Index j = 0; j < t; ++j) {
          if (!(sub >> j & 1u)) continue;
          const double awdeg = (rs[j] - a(j, i)) / (size - 1);
          acc += (a(j, i) - awdeg) * get(sub, j);
        }
        w_[slot++] = acc;
      }
    }
  }

  /// w_T(i) for local index i in mask T.
  double get(std::uint32_t mask, Index i) const {
    const std::uint32_t below = mask & ((std::uint32_t{1} << i) - 1u);
    return w_[offset_[mask] + std::popcount(below)];
  }

  std::uint32_t full_mask() const { return (std::uint32_t{1} << verts_.size()) - 1u; }

 private:
  std::vector<Index> verts_;
  std::vector<std::size_t> offset_;
  std::vector<double> w_;
};

Index local_index(const IndexSet& S, Index i) {
  for (Index k = 0; k < S.size(); ++k)
    if (S[k] == i) return k;
  return -1;
}

}  // namespace

double weighted_degree(const AffinityMatrix& A, const IndexSet& S, Index i) {
  check_set(A, S);
  double s = 0.0;
  for (Index j : S) s += A(i, j);
  return s / static_cast<double>(S.size());
}

double phi(const AffinityMatrix& A, const IndexSet& S, Index i, Index j) {
  return A(i, j) - weighted_degree(A, S, i);
}

double node_weight(const AffinityMatrix& A, const IndexSet& S, Index i) {
  check_set(A, S);
  const Index k = local_index(S, i);
  if (k < 0) throw Error(ErrorCode::NotMember, "vertex " + std::to_string(i) + " is not in S");
  WeightTable table(A, S.members());
  return table.get(table.full_mask(), k);
}

double total_weight(const AffinityMatrix& A, const IndexSet& S) {
  check_set(A, S);
  WeightTable table(A, S.members());
  double W = 0.0;
  for (Index k = 0; k < S.size(); ++k) W += table.get(table.full_mask(), k);
  return W;
}

DominantSetReport is_dominant_set(const AffinityMatrix& A, const IndexSet& S) {
  check_set(A, S);
  WeightTable table(A, S.members());
  const std::uint32_t full = table.full_mask();
  DominantSetReport rep;
  rep.set = S;
  bool ok = true;
  std::vector<double> ws;
  for (Index k = 0; k < S.size(); ++k) {
    ws.push_back(table.get(full, k));
    ok = ok && ws.back() > 0.0;
  }
  rep.internal_weights = ws;

  // w_{S+i}(i) = sum_{j in S} phi_S(j, i) w_S(j)
  std::vector<double> awdeg;
  for (Index j : S) awdeg.push_back(weighted_degree(A, S, j));
  for (Index i = 0; i < A.size(); ++i) {
    if (S.contains(i)) continue;
    double w = 0.0;
    for (Index k = 0; k < S.size(); ++k) w += (A(S[k], i) - awdeg[k]) * ws[k];
    rep.external_violations.emplace_back(i, w);
    ok = ok && w < 0.0;
  }
  rep.is_dominant = ok;
  return rep;
}

SimplexVector characteristic_vector(const AffinityMatrix& A, const IndexSet& S) {
  const DominantSetReport rep = is_dominant_set(A, S);
  if (!rep.is_dominant) throw Error(ErrorCode::NotDominant, "set is not dominant");
  double W = 0.0;
  for (double w : rep.internal_weights) W += w;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(A.size());
  for (Index k = 0; k < S.size(); ++k) x(S[k]) = rep.internal_weights[k] / W;
  SimplexVector sx = SimplexVector::normalized(std::move(x));

  // KKT: equal payoff on S, strictly lower payoff outside.
  const Eigen::VectorXd g = A.values() * sx.values();
  const double pi = sx.values().dot(g);
  const double tol = 1e-9 * std::max(1.0, A.max_weight());
  for (Index i = 0; i < A.size(); ++i) {
    const bool inside = S.contains(i);
    if ((inside && std::abs(g(i) - pi) > tol) || (!inside && g(i) >= pi))
      throw Error(ErrorCode::Internal, "characteristic vector fails the KKT check at vertex " +
                                           std::to_string(i));
  }
  return sx;
}

Cluster extract_dominant_set(const AffinityMatrix& A, const ExtractConfig& cfg) {
  if (A.size() == 0) throw Error(ErrorCode::ZeroSize, "empty graph");
  if (A.all_zero()) throw Error(ErrorCode::AllZeroMatrix, "affinity matrix has no positive entry");
  const Payoff B(A.values());
  const FixedPointResult r =
      solve(B, perturbed_barycenter(A.size(), cfg.seed), cfg.solver, cfg.solver_cfg);
  Cluster c;
  c.support = relative_support(r.x.values(), cfg.solver_cfg.zero_tol);
  c.characteristic = SimplexVector(scatter(restrict_to(r.x.values(), c.support).values(),
                                           c.support, A.size()));
  c.cohesiveness = quadratic_value(A, c.characteristic);
  return c;
}

PeelResult peel_off_enumerate(const AffinityMatrix& A, const PeelConfig& cfg) {
  PeelResult out;
  IndexSet remaining = IndexSet::range(A.size());
  Index round = 0;
  while (remaining.size() >= std::max<Index>(cfg.min_cluster_size, 1)) {
    if (cfg.max_clusters > 0 && static_cast<Index>(out.clusters.size()) >= cfg.max_clusters) break;
    const AffinityMatrix sub = A.restricted(remaining);
    if (sub.all_zero()) break;
    ExtractConfig ecfg = cfg.extract;
    ecfg.seed = cfg.extract.seed + static_cast<std::uint64_t>(round++);
    const Cluster local = extract_dominant_set(sub, ecfg);

    std::vector<Index> global;
    for (Index k : local.support) global.push_back(remaining[k]);
    Cluster c;
    c.support = IndexSet(std::move(global));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(A.size());
    for (Index k = 0; k < remaining.size(); ++k) x(remaining[k]) = local.characteristic[k];
    c.characteristic = SimplexVector(std::move(x));
    c.cohesiveness = local.cohesiveness;
    remaining = remaining.minus(c.support);
    out.clusters.push_back(std::move(c));
  }
  out.residual = remaining;
  return out;
}

std::vector<IndexSet> brute_force_dominant_sets(const AffinityMatrix& A) {
  const Index n = A.size();
  if (n > 15) throw Error(ErrorCode::TooLarge, "brute-force enumeration limited to n <= 15");
  std::vector<IndexSet> found;
  if (n == 0) return found;
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[i] = i;
  WeightTable table(A, all);
  const std::uint32_t full = table.full_mask();
  for (std::uint32_t m = 1; m <= full; ++m) {
    bool ok = true;
    for (Index i = 0; i < n && ok; ++i) {
      if (m >> i & 1u)
        ok = table.get(m, i) > 0.0;
      else
        ok = table.get(m | (std::uint32_t{1} << i), i) < 0.0;
    }
    if (!ok) continue;
    std::vector<Index> members;
    for (Index i = 0; i < n; ++i)
      if (m >> i & 1u) members.push_back(i);
    found.emplace_back(std::move(members));
  }
  return found;
}

}  // namespace domset
