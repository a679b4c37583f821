#include "domset/affinity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace domset {

namespace {

void check_symmetric_square(const Eigen::MatrixXd& M, const char* what) {
  if (M.rows() != M.cols()) throw Error(ErrorCode::NonSquare, std::string(what) + " is not square");
  if (!M.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

// Returns C itself when numerically positive definite, else C + eps I.
Eigen::MatrixXd positive_definite(const Eigen::MatrixXd& C) {
  const Index d = C.rows();
  Eigen::MatrixXd S = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() > 1e-12 * top) return S;
  const double eps = 1e-6 * S.trace() / static_cast<double>(d);
  if (!(eps > 0.0))
    throw Error(ErrorCode::SingularAfterRegularization,
                "covariance has no positive trace; cannot regularize");
  S.diagonal().array() += eps;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(S, Eigen::EigenvaluesOnly);
  if (!(check.eigenvalues().minCoeff() > 0.0))
    throw Error(ErrorCode::SingularAfterRegularization, "covariance is singular after regularization");
  return S;
}

double mean_distance_row(const CovarianceDescriptor& a, const Tracklet& J) {
  double s = 0.0;
  for (const auto& b : J) s += covariance_distance(a, b);
  return s / static_cast<double>(J.size());
}

void check_tracklets(const Tracklet& I, const Tracklet& J) {
  if (I.empty() || J.empty()) throw Error(ErrorCode::EmptyTracklet, "tracklet has no descriptors");
}

Index peak(const SimplexVector& x) {
  Index best = 0;
  for (Index i = 1; i < x.size(); ++i)
    if (x[i] > x[best]) best = i;
  return best;
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}

}  // namespace

CovarianceDescriptor covariance_descriptor(const Eigen::MatrixXd& F) {
  if (F.rows() < 2)
    throw Error(ErrorCode::TooFewSamples, "covariance needs at least two feature vectors");
  const Eigen::RowVectorXd mu = F.colwise().mean();
  const Eigen::MatrixXd centered = F.rowwise() - mu;
  return {(centered.transpose() * centered) / static_cast<double>(F.rows() - 1)};
}

double covariance_distance(const Eigen::MatrixXd& C1, const Eigen::MatrixXd& C2) {
  check_symmetric_square(C1, "covariance");
  check_symmetric_square(C2, "covariance");
  if (C1.rows() != C2.rows())
    throw Error(ErrorCode::DimensionMismatch, "covariances have different dimensions");
  const Eigen::MatrixXd A = positive_definite(C1);
  const Eigen::MatrixXd B = positive_definite(C2);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, B, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    throw Error(ErrorCode::SingularAfterRegularization, "generalized eigensolve failed");
  double s = 0.0;
  for (Index k = 0; k < ges.eigenvalues().size(); ++k) {
    const double l = std::log(ges.eigenvalues()(k));
    s += l * l;
  }
  return std::sqrt(s);
}

double joint_distance(double desc_dist, double loc_dist, double kappa, double iota) {
  if (desc_dist < 0.0 || loc_dist < 0.0 || kappa < 0.0 || iota < 0.0)
    throw Error(ErrorCode::InvalidArgument, "joint_distance inputs must be nonnegative");
  return std::sqrt(kappa * desc_dist * desc_dist + iota * loc_dist * loc_dist);
}

double similarity(double dist, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (dist < 0.0) throw Error(ErrorCode::InvalidArgument, "distance must be nonnegative");
  return std::exp(-dist / (2.0 * gamma * gamma));
}

AffinityMatrix kernel_trick_affinity(const Eigen::MatrixXd& K) {
  check_symmetric_square(K, "kernel matrix");
  const Index n = K.rows();
  for (Index i = 0; i < n; ++i)
    if (std::abs(K(i, i) - 1.0) > 1e-12)
      throw Error(ErrorCode::NonNormalizedKernel,
                  "kernel diagonal entry " + std::to_string(i) + " is not 1");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) {
      const double kij = 0.5 * (K(i, j) + K(j, i));
      const double r = std::max(0.0, (K(i, i) + K(j, j) - 2.0 * kij) / 2.0);
      const double a = std::clamp(1.0 - std::sqrt(r), 0.0, 1.0);
      A(i, j) = a;
      A(j, i) = a;
    }
  return make_trusted_affinity(std::move(A));
}

Eigen::MatrixXd laplacian_kernel(const Eigen::MatrixXd& X, std::optional<double> gamma) {
  const Index n = X.rows();
  Eigen::MatrixXd L1 = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> off;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) {
      const double d = (X.row(i) - X.row(j)).cwiseAbs().sum();
      L1(i, j) = d;
      L1(j, i) = d;
      off.push_back(d);
    }
  double g;
  if (gamma) {
    g = *gamma;
  } else {
    if (off.empty()) throw Error(ErrorCode::DegenerateSigma, "no pairwise distances");
    const double med = median_of(std::move(off));
    if (!(med > 0.0)) throw Error(ErrorCode::DegenerateSigma, "median L1 distance is zero");
    g = 1.0 / med;
  }
  if (!(g > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  return (-g * L1).array().exp();
}

NodeScoreVector::NodeScoreVector(Eigen::VectorXd b) : b_(std::move(b)) {
  for (Index i = 0; i < b_.size(); ++i)
    if (!std::isfinite(b_(i)) || b_(i) < 0.0)
      throw Error(ErrorCode::NegativeWeight,
                  "node score " + std::to_string(i) + " is negative or not finite");
}

Eigen::MatrixXd homogenize(const AffinityMatrix& A, const NodeScoreVector& b) {
  if (A.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "homogenize: sizes differ");
  const Eigen::VectorXd& v = b.values();
  return A.values() + Eigen::VectorXd::Ones(v.size()) * v.transpose() +
         v * Eigen::RowVectorXd::Ones(v.size());
}

double tracklet_affinity_mean(const Tracklet& I, const Tracklet& J) {
  check_tracklets(I, J);
  double s = 0.0;
  for (const auto& a : I) s += mean_distance_row(a, J);
  return std::exp(-s / static_cast<double>(I.size()));
}

double tracklet_affinity_min(const Tracklet& I, const Tracklet& J) {
  check_tracklets(I, J);
  double best = mean_distance_row(I.front(), J);
  for (std::size_t k = 1; k < I.size(); ++k) best = std::min(best, mean_distance_row(I[k], J));
  return std::exp(-best);
}

double tracklet_affinity_representative(const Tracklet& I, const SimplexVector& xI,
                                        const Tracklet& J, const SimplexVector& xJ) {
  check_tracklets(I, J);
  if (xI.size() != static_cast<Index>(I.size()) || xJ.size() != static_cast<Index>(J.size()))
    throw Error(ErrorCode::LengthMismatch, "characteristic vector length differs from tracklet");
  return std::exp(-covariance_distance(I[peak(xI)], J[peak(xJ)]));
}

std::pair<Tracklet, Tracklet> split_tracklet(const Tracklet& T) {
  const std::size_t half = (T.size() + 1) / 2;
  return {Tracklet(T.begin(), T.begin() + half), Tracklet(T.begin() + half, T.end())};
}

AffinityMatrix update_with_priors(const AffinityMatrix& A, const std::vector<IndexSet>& priors,
                                  const std::vector<VertexPair>& forbidden) {
  const Index n = A.size();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const auto& p : priors)
    for (Index v : p) {
      if (v < 0 || v >= n) throw Error(ErrorCode::OutOfRange, "prior vertex out of range");
      if (seen[v]) throw Error(ErrorCode::OverlappingPriors, "vertex " + std::to_string(v) +
                                                                 " appears in two prior clusters");
      seen[v] = 1;
    }
  Eigen::MatrixXd M = A.values();
  for (const auto& p : priors)
    for (Index a : p)
      for (Index b : p)
        if (a != b) M(a, b) = 1.0;
  for (const auto& f : forbidden) {
    if (f.i < 0 || f.i >= n || f.j < 0 || f.j >= n)
      throw Error(ErrorCode::OutOfRange, "forbidden pair out of range");
    M(f.i, f.j) = 0.0;
    M(f.j, f.i) = 0.0;
  }
  return make_trusted_affinity(std::move(M));
}

CoassociationMatrix coassociation(const std::vector<std::vector<Index>>& clusterings) {
  if (clusterings.empty()) throw Error(ErrorCode::EmptyList, "no clusterings given");
  const std::size_t n = clusterings.front().size();
  for (std::size_t r = 0; r < clusterings.size(); ++r)
    if (clusterings[r].size() != n)
      throw Error(ErrorCode::LengthMismatch, "clustering " + std::to_string(r) + " has " +
                                                 std::to_string(clusterings[r].size()) +
                                                 " labels, expected " + std::to_string(n));
  const Index N = static_cast<Index>(n);
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(N, N);
  for (const auto& labels : clusterings)
    for (Index j = 0; j < N; ++j)
      for (Index i = 0; i < j; ++i)
        if (labels[i] == labels[j]) ++counts(i, j);
  const double m = static_cast<double>(clusterings.size());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(N, N);
  for (Index j = 0; j < N; ++j)
    for (Index i = 0; i < j; ++i) {
      phi(i, j) = counts(i, j) / m;
      phi(j, i) = phi(i, j);
    }
  return {make_trusted_affinity(std::move(phi)), static_cast<Index>(clusterings.size())};
}

PeelResult consensus(const CoassociationMatrix& coassoc, const PeelConfig& cfg) {
  return peel_off_enumerate(coassoc.values, cfg);
}

}  // namespace domset
