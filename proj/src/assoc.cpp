#include "domset/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace domset {

namespace {

// Removes v from a cluster, renormalizing the memberships. Returns false when
// the cluster becomes empty.
bool remove_member(ConstrainedCluster& c, Index v) {
  c.support = c.support.minus(IndexSet{v});
  c.satisfied_constraints = c.satisfied_constraints.minus(IndexSet{v});
  if (c.support.empty()) return false;
  Eigen::VectorXd x = c.memberships.values();
  x(v) = 0.0;
  if (!(x.sum() > 0.0)) {
    for (Index u : c.support) x(u) = 1.0;
  }
  c.memberships = SimplexVector::normalized(std::move(x));
  return true;
}

void drop_empty(std::vector<ConstrainedCluster>& cs) {
  cs.erase(std::remove_if(cs.begin(), cs.end(),
                          [](const ConstrainedCluster& c) { return c.support.empty(); }),
           cs.end());
}

}  // namespace

void RankedNeighborList::validate() const {
  if (neighbors.empty()) throw Error(ErrorCode::EmptyList, "neighbor list is empty");
  for (std::size_t k = 0; k < neighbors.size(); ++k) {
    if (!(neighbors[k].distance >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "neighbor distance must be nonnegative");
    if (k > 0 && neighbors[k].distance < neighbors[k - 1].distance)
      throw Error(ErrorCode::InvalidArgument, "neighbor distances are not ascending");
  }
}

IndexSet dynamic_nn_select(const RankedNeighborList& nns, double theta) {
  nns.validate();
  std::vector<Index> chosen{nns.neighbors.front().id};
  for (std::size_t m = 0; m + 1 < nns.neighbors.size(); ++m) {
    const double a = nns.neighbors[m].distance;
    const double b = nns.neighbors[m + 1].distance;
    const double ratio = b > 0.0 ? a / b : 1.0;
    if (!(ratio > theta)) break;
    chosen.push_back(nns.neighbors[m + 1].id);
  }
  return IndexSet(std::move(chosen));
}

PruneDecision prune_query(const RankedNeighborList& nns, double beta) {
  nns.validate();
  if (nns.neighbors.size() < 2)
    throw Error(ErrorCode::TooFewNeighbors, "pruning needs at least two neighbors");
  const double first = nns.neighbors.front().distance;
  const double last = nns.neighbors.back().distance;
  const double ratio = last > 0.0 ? first / last : 1.0;
  return ratio > beta ? PruneDecision::Drop : PruneDecision::Keep;
}

GroupedAffinity::GroupedAffinity(AffinityMatrix A, std::vector<Index> group_of)
    : A_(std::move(A)), group_of_(std::move(group_of)) {
  if (static_cast<Index>(group_of_.size()) != A_.size())
    throw Error(ErrorCode::LengthMismatch, "group assignment length differs from matrix size");
  Index groups = 0;
  for (Index g : group_of_) {
    if (g < 0) throw Error(ErrorCode::OutOfRange, "negative group id");
    groups = std::max(groups, g + 1);
  }
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(groups));
  for (std::size_t v = 0; v < group_of_.size(); ++v)
    members[group_of_[v]].push_back(static_cast<Index>(v));
  for (Index p = 0; p < groups; ++p) {
    if (members[p].empty())
      throw Error(ErrorCode::EmptyGroup, "group " + std::to_string(p) + " has no entities");
    groups_.emplace_back(std::move(members[p]));
  }
  if (groups_.empty()) throw Error(ErrorCode::EmptyGroup, "no groups");
}

Eigen::MatrixXd GroupedAffinity::block(Index p, Index q) const {
  const IndexSet& rows = group(p);
  const IndexSet& cols = group(q);
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (Index c = 0; c < cols.size(); ++c)
    for (Index r = 0; r < rows.size(); ++r) out(r, c) = A_(rows[r], cols[c]);
  return out;
}

BoolMatrix transitive_closure(const BoolMatrix& allowed) {
  if (allowed.rows() != allowed.cols()) throw Error(ErrorCode::NonSquare, "gating mask");
  BoolMatrix R = allowed;
  const Index n = R.rows();
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      if (R(i, k))
        for (Index j = 0; j < n; ++j)
          if (R(k, j)) R(i, j) = true;
  return R;
}

GroupedAffinity apply_gating(const GroupedAffinity& ga, const BoolMatrix& allowed_groups) {
  const Index I = ga.group_count();
  if (allowed_groups.rows() != I || allowed_groups.cols() != I)
    throw Error(ErrorCode::DimensionMismatch, "gating mask must be I x I");
  BoolMatrix sym = allowed_groups;
  for (Index p = 0; p < I; ++p)
    for (Index q = 0; q < I; ++q) sym(p, q) = allowed_groups(p, q) || allowed_groups(q, p);
  const BoolMatrix R = transitive_closure(sym);
  Eigen::MatrixXd M = ga.affinity().values();
  const Index n = M.rows();
  std::vector<Index> groups(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) groups[v] = ga.group_of(v);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const Index p = groups[i], q = groups[j];
      if (p != q && !R(p, q)) M(i, j) = 0.0;
    }
  return GroupedAffinity(make_trusted_affinity(std::move(M)), std::move(groups));
}

std::vector<ConstrainedCluster> AssociationResult::all() const {
  std::vector<ConstrainedCluster> out;
  for (const auto& g : per_group) out.insert(out.end(), g.begin(), g.end());
  return out;
}

AssociationResult track_association(const GroupedAffinity& ga, const AssociationConfig& cfg) {
  const AffinityMatrix& A = ga.affinity();
  AssociationResult out;
  std::uint64_t round = 0;
  for (Index p = 0; p < ga.group_count(); ++p) {
    std::vector<ConstrainedCluster> cp;
    IndexSet Q = ga.group(p);
    while (!Q.empty()) {
      const ConstrainedProgram prog(A, Q, choose_alpha(A, Q, cfg.enumerate.alpha));
      CdscConfig c = cfg.enumerate.cdsc;
      c.seed = cfg.enumerate.cdsc.seed + round++;
      ConstrainedCluster cl = solve_cdsc(prog, c);
      Q = Q.minus(cl.support);
      cp.push_back(std::move(cl));
    }
    out.per_group.push_back(std::move(cp));
  }
  return out;
}

AssociationResult refine_constraint1(const AssociationResult& result) {
  AssociationResult out = result;
  for (auto& cp : out.per_group) {
    std::vector<double> sizes;
    for (const auto& c : cp) sizes.push_back(static_cast<double>(c.support.size()));
    IndexSet entities;
    for (const auto& c : cp) entities = entities.united(c.support);
    for (Index v : entities) {
      std::vector<std::size_t> holders;
      for (std::size_t s = 0; s < cp.size(); ++s)
        if (cp[s].support.contains(v)) holders.push_back(s);
      if (holders.size() <= 1) continue;
      std::size_t winner = holders.front();
      double best = sizes[winner] * cp[winner].memberships[v];
      for (std::size_t s : holders) {
        const double score = sizes[s] * cp[s].memberships[v];
        if (score > best) {
          best = score;
          winner = s;
        }
      }
      for (std::size_t s : holders)
        if (s != winner) remove_member(cp[s], v);
    }
    drop_empty(cp);
  }
  return out;
}

AssociationResult refine_constraint2(const AssociationResult& result, const GroupedAffinity& ga) {
  AssociationResult out = result;
  const Index I = ga.group_count();

  // Flat (group, index) addressing; the flat position is the set id.
  std::vector<std::pair<std::size_t, std::size_t>> ids;
  for (std::size_t p = 0; p < out.per_group.size(); ++p)
    for (std::size_t k = 0; k < out.per_group[p].size(); ++k) ids.emplace_back(p, k);
  auto at = [&](std::size_t id) -> ConstrainedCluster& {
    return out.per_group[ids[id].first][ids[id].second];
  };
  // Intersections use the sets as they were before any removal.
  std::vector<IndexSet> original;
  for (std::size_t id = 0; id < ids.size(); ++id) original.push_back(at(id).support);

  const Index n = ga.affinity().size();
  for (Index v = 0; v < n; ++v) {
    std::vector<std::size_t> holders;
    for (std::size_t id = 0; id < ids.size(); ++id)
      if (original[id].contains(v)) holders.push_back(id);
    if (static_cast<Index>(holders.size()) <= I) continue;

    const std::size_t home_group = static_cast<std::size_t>(ga.group_of(v));
    std::optional<std::size_t> home;
    for (std::size_t id : holders)
      if (ids[id].first == home_group) {
        home = id;
        break;
      }
    if (!home) home = holders.front();
    const IndexSet home_rest = original[*home].minus(IndexSet{v});

    std::vector<std::pair<Index, std::size_t>> ranked;  // (intersection size, id)
    for (std::size_t id : holders) {
      if (id == *home) continue;
      const Index overlap = original[id].minus(IndexSet{v}).intersected(home_rest).size();
      if (overlap > 0) ranked.emplace_back(overlap, id);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::size_t> keep{*home};
    for (std::size_t k = 0; k < ranked.size() && static_cast<Index>(keep.size()) < I; ++k)
      keep.push_back(ranked[k].second);
    for (std::size_t id : holders)
      if (std::find(keep.begin(), keep.end(), id) == keep.end()) remove_member(at(id), v);
  }
  for (auto& cp : out.per_group) drop_empty(cp);
  return out;
}

Eigen::VectorXd feature_weights(const std::vector<std::vector<double>>& score_curves) {
  if (score_curves.empty()) throw Error(ErrorCode::EmptyList, "no score curves");
  const std::size_t L = score_curves.front().size();
  if (L < 2) throw Error(ErrorCode::InvalidArgument, "score curves need at least two samples");
  const Index F = static_cast<Index>(score_curves.size());
  Eigen::VectorXd area(F);
  for (Index f = 0; f < F; ++f) {
    const auto& c = score_curves[f];
    if (c.size() != L) throw Error(ErrorCode::LengthMismatch, "score curves differ in length");
    double s = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
      if (!(c[k] >= -1e-12 && c[k] <= 1.0 + 1e-12))
        throw Error(ErrorCode::InvalidArgument, "score curve values must lie in [0, 1]");
      if (k > 0) s += 0.5 * (c[k - 1] + c[k]);
    }
    area(f) = s / static_cast<double>(L - 1);
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(F);
  const Index zero = (area.array() <= 0.0).count();
  if (zero > 0) {
    for (Index f = 0; f < F; ++f)
      if (area(f) <= 0.0) w(f) = 1.0 / static_cast<double>(zero);
    return w;
  }
  w = area.cwiseInverse();
  return w / w.sum();
}

}  // namespace domset
