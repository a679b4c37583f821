#ifndef DOMSET_AFFINITY_HPP
#define DOMSET_AFFINITY_HPP

#include <optional>
#include <utility>
#include <vector>

#include "domset/core.hpp"
#include "domset/dsets.hpp"

namespace domset {

/// Sample covariance of a set of feature vectors.
struct CovarianceDescriptor {
  Eigen::MatrixXd C;
  Index dim() const noexcept { return C.rows(); }
};

/// Rows of F are the M feature vectors; uses the 1/(M-1) normalizer.
CovarianceDescriptor covariance_descriptor(const Eigen::MatrixXd& F);

/// sqrt(sum_k ln^2 lambda_k) over the generalized eigenvalues of (C1, C2).
/// A matrix that is not numerically positive definite gets eps*I added first,
/// eps = 1e-6 * trace / d.
double covariance_distance(const Eigen::MatrixXd& C1, const Eigen::MatrixXd& C2);
inline double covariance_distance(const CovarianceDescriptor& a, const CovarianceDescriptor& b) {
  return covariance_distance(a.C, b.C);
}

/// sqrt(kappa * desc^2 + iota * loc^2)
double joint_distance(double desc_dist, double loc_dist, double kappa = 1.0, double iota = 1.0);

/// exp(-dist / (2 gamma^2))
double similarity(double dist, double gamma);

/// Default gamma for global-feature edge weights.
inline constexpr double kGlobalFeatureGamma = 128.0;

/// A_ij = 1 - sqrt((K_ii + K_jj - 2 K_ij) / 2), clamped to [0, 1], zero diagonal.
AffinityMatrix kernel_trick_affinity(const Eigen::MatrixXd& K);

/// K_ij = exp(-gamma |x_i - x_j|_1) over the rows of X. Without gamma, the
/// inverse median pairwise L1 distance is used.
Eigen::MatrixXd laplacian_kernel(const Eigen::MatrixXd& X, std::optional<double> gamma = {});

/// Nonnegative per-node linear payoff.
class NodeScoreVector {
 public:
  explicit NodeScoreVector(Eigen::VectorXd b);
  const Eigen::VectorXd& values() const noexcept { return b_; }
  Index size() const noexcept { return b_.size(); }

 private:
  Eigen::VectorXd b_;
};

/// B = A + e b' + b e', so that x'Bx = x'Ax + 2 b'x on the simplex.
Eigen::MatrixXd homogenize(const AffinityMatrix& A, const NodeScoreVector& b);

using Tracklet = std::vector<CovarianceDescriptor>;

/// exp(-mean_i mean_j dist(C_i, C_j))
double tracklet_affinity_mean(const Tracklet& I, const Tracklet& J);
/// exp(-min_i mean_j dist(C_i, C_j))
double tracklet_affinity_min(const Tracklet& I, const Tracklet& J);
/// exp(-dist(C_a, C_b)) where a, b maximize each tracklet's characteristic vector.
double tracklet_affinity_representative(const Tracklet& I, const SimplexVector& xI,
                                        const Tracklet& J, const SimplexVector& xJ);

/// Splits a sequence into halves of sizes ceil(L/2) and floor(L/2).
std::pair<Tracklet, Tracklet> split_tracklet(const Tracklet& T);

struct VertexPair {
  Index i;
  Index j;
};

/// Co-clustered pairs are pinned to 1, then forbidden pairs to 0.
AffinityMatrix update_with_priors(const AffinityMatrix& A, const std::vector<IndexSet>& priors,
                                  const std::vector<VertexPair>& forbidden);

struct CoassociationMatrix {
  AffinityMatrix values;
  Index ensemble_size = 0;
};

/// phi(i,j) = fraction of clusterings putting i and j in the same cluster.
CoassociationMatrix coassociation(const std::vector<std::vector<Index>>& clusterings);

/// Peel-off dominant sets of the co-association matrix.
PeelResult consensus(const CoassociationMatrix& coassoc, const PeelConfig& cfg = {});

}  // namespace domset

#endif  // DOMSET_AFFINITY_HPP
