#ifndef DOMSET_CORE_HPP
#define DOMSET_CORE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace domset {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class ErrorCode {
  NonSquare,
  AsymmetryExceedsTolerance,
  NegativeWeight,
  NonZeroDiagonal,
  NonFinite,
  ZeroSize,
  DimensionMismatch,
  NotOnSimplex,
  ZeroDenominator,
  EmptySet,
  NotMember,
  NotDominant,
  AllZeroMatrix,
  TooLarge,
  ConstraintUnsatisfied,
  DegenerateSigma,
  TooFewSamples,
  SingularAfterRegularization,
  NonNormalizedKernel,
  OverlappingPriors,
  LengthMismatch,
  EmptyList,
  TooFewNeighbors,
  EmptyGroup,
  EmptyTracklet,
  UnassignedVertex,
  DuplicateEdge,
  OutOfRange,
  InvalidArgument,
  Parse,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Sorted set of unique vertex indices.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<Index> members);
  IndexSet(std::initializer_list<Index> members);

  static IndexSet range(Index n);

  const std::vector<Index>& members() const noexcept { return members_; }
  Index size() const noexcept { return static_cast<Index>(members_.size()); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Index i) const;
  Index operator[](Index k) const { return members_[static_cast<std::size_t>(k)]; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  IndexSet united(const IndexSet& other) const;
  IndexSet intersected(const IndexSet& other) const;
  IndexSet minus(const IndexSet& other) const;
  /// Complement within {0, ..., n-1}.
  IndexSet complement(Index n) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> members_;
};

/// Symmetric, nonnegative weight matrix with a zero diagonal.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  /// Validates in strict mode; throws on any invariant violation.
  explicit AffinityMatrix(Eigen::MatrixXd values);

  static AffinityMatrix zeros(Index n);
  /// Undirected edge list (0-based). Duplicate edges and self loops are rejected.
  struct Edge {
    Index i;
    Index j;
    double weight;
  };
  static AffinityMatrix from_edges(Index n, const std::vector<Edge>& edges);

  Index size() const noexcept { return values_.rows(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }
  bool all_zero() const { return size() == 0 || values_.maxCoeff() <= 0.0; }
  double max_weight() const { return size() == 0 ? 0.0 : values_.maxCoeff(); }

  AffinityMatrix restricted(const IndexSet& rows) const;

 private:
  struct Trusted {};
  AffinityMatrix(Eigen::MatrixXd values, Trusted) : values_(std::move(values)) {}
  friend AffinityMatrix make_trusted_affinity(Eigen::MatrixXd values);

  Eigen::MatrixXd values_;
};

/// Skips validation. Only for callers that build a matrix which is an
/// affinity matrix by construction (submatrices, products of valid inputs).
AffinityMatrix make_trusted_affinity(Eigen::MatrixXd values);

/// Nonnegative vector summing to one.
class SimplexVector {
 public:
  SimplexVector() = default;
  /// Accepts v if it is nonnegative and its sum is within 1e-9 of one, then
  /// renormalizes so the sum is one to rounding.
  explicit SimplexVector(Eigen::VectorXd v);

  /// Clamps tiny negatives (> -1e-12) to zero and rescales to unit mass.
  static SimplexVector normalized(Eigen::VectorXd v);
  static SimplexVector vertex(Index n, Index i);

  Index size() const noexcept { return x_.size(); }
  const Eigen::VectorXd& values() const noexcept { return x_; }
  double operator[](Index i) const { return x_(i); }

 private:
  Eigen::VectorXd x_;
};

struct Cluster {
  IndexSet support;
  SimplexVector characteristic;
  double cohesiveness = 0.0;
};

enum class BuildMode { Strict, Symmetrize };

struct AffinityBuild {
  AffinityMatrix matrix;
  /// Largest absolute change applied to any entry (0 in strict mode).
  double max_correction = 0.0;
};

AffinityBuild build_affinity(const Eigen::MatrixXd& raw, BuildMode mode = BuildMode::Strict,
                             double asymmetry_tol = 1e-12);

SimplexVector barycenter(Index n);

/// Barycenter with a deterministic relative perturbation of the given magnitude
/// per component, derived from the seed.
SimplexVector perturbed_barycenter(Index n, std::uint64_t seed, double magnitude = 1e-4);

/// Indices with x_i > zero_tol.
IndexSet support(const SimplexVector& x, double zero_tol);
IndexSet support(const Eigen::VectorXd& x, double zero_tol);

/// Indices with x_i > rel_tol * max_i x_i.
IndexSet relative_support(const Eigen::VectorXd& x, double rel_tol = 1e-6);

template <typename MatrixDerived, typename VectorDerived>
double quadratic_value(const Eigen::MatrixBase<MatrixDerived>& A,
                       const Eigen::MatrixBase<VectorDerived>& x) {
  if (A.rows() != A.cols() || A.cols() != x.size())
    throw Error(ErrorCode::DimensionMismatch, "quadratic_value: dimensions disagree");
  return x.dot(A * x);
}

inline double quadratic_value(const AffinityMatrix& A, const SimplexVector& x) {
  return quadratic_value(A.values(), x.values());
}

/// Principal submatrix indexed by `rows`.
Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& M, const IndexSet& rows);

/// Restricts x to `rows`, renormalizing to unit mass.
SimplexVector restrict_to(const Eigen::VectorXd& x, const IndexSet& rows);

/// Writes the local vector back into a zero vector of length n at `rows`.
Eigen::VectorXd scatter(const Eigen::VectorXd& local, const IndexSet& rows, Index n);

}  // namespace domset

#endif  // DOMSET_CORE_HPP
