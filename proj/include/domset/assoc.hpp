#ifndef DOMSET_ASSOC_HPP
#define DOMSET_ASSOC_HPP

#include <vector>

#include "domset/cdsc.hpp"
#include "domset/core.hpp"

namespace domset {

struct Neighbor {
  Index id;
  double distance;
};

/// Neighbors of one query in ascending distance order.
struct RankedNeighborList {
  Index query_id = 0;
  std::vector<Neighbor> neighbors;

  /// Throws EmptyList or InvalidArgument (unsorted or negative distances).
  void validate() const;
};

/// Longest prefix whose consecutive distance ratios d_m / d_{m+1} exceed theta.
IndexSet dynamic_nn_select(const RankedNeighborList& nns, double theta = 0.7);

enum class PruneDecision { Keep, Drop };

/// Drop when d_first / d_last > beta.
PruneDecision prune_query(const RankedNeighborList& nns, double beta = 0.7);

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Affinity over all entities plus their partition into groups (cameras).
class GroupedAffinity {
 public:
  /// group_of[v] in [0, I); every group id below the maximum must be used.
  GroupedAffinity(AffinityMatrix A, std::vector<Index> group_of);

  const AffinityMatrix& affinity() const noexcept { return A_; }
  Index group_count() const noexcept { return static_cast<Index>(groups_.size()); }
  const IndexSet& group(Index p) const { return groups_.at(static_cast<std::size_t>(p)); }
  Index group_of(Index v) const { return group_of_.at(static_cast<std::size_t>(v)); }
  /// Block A^{p x q}.
  Eigen::MatrixXd block(Index p, Index q) const;

 private:
  AffinityMatrix A_;
  std::vector<Index> group_of_;
  std::vector<IndexSet> groups_;
};

/// Closes a group-level mask under allowed(i,j) and allowed(j,z) => allowed(i,z).
BoolMatrix transitive_closure(const BoolMatrix& allowed);

/// Zeroes every cross-group block whose pair is not allowed after closure.
/// Within-group blocks are always kept.
GroupedAffinity apply_gating(const GroupedAffinity& ga, const BoolMatrix& allowed_groups);

struct AssociationResult {
  /// per_group[p] holds the clusters enumerated with constraint set group p.
  std::vector<std::vector<ConstrainedCluster>> per_group;

  /// All clusters, group by group; the position is the set id.
  std::vector<ConstrainedCluster> all() const;
};

struct AssociationConfig {
  EnumerateConfig enumerate{};
};

/// For every group p, enumerates constrained clusters with Q starting at
/// group p and shrinking by each support until empty.
AssociationResult track_association(const GroupedAffinity& ga, const AssociationConfig& cfg = {});

/// Within each group's collection, an entity found in several sets stays only
/// in the set maximizing |set| * membership (ties to the lowest set id).
AssociationResult refine_constraint1(const AssociationResult& result);

/// An entity in more than I sets keeps its home set (from its own group) and
/// the I-1 other sets sharing the most members with the home set.
AssociationResult refine_constraint2(const AssociationResult& result, const GroupedAffinity& ga);

/// Inverse trapezoid-area weights for min-max normalized score curves.
Eigen::VectorXd feature_weights(const std::vector<std::vector<double>>& score_curves);

}  // namespace domset

#endif  // DOMSET_ASSOC_HPP
