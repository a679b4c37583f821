#include "domset/core.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "domset/random.hpp"

namespace domset {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::AsymmetryExceedsTolerance: return "AsymmetryExceedsTolerance";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroSize: return "ZeroSize";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotOnSimplex: return "NotOnSimplex";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::NotDominant: return "NotDominant";
    case ErrorCode::AllZeroMatrix: return "AllZeroMatrix";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ConstraintUnsatisfied: return "ConstraintUnsatisfied";
    case ErrorCode::DegenerateSigma: return "DegenerateSigma";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::SingularAfterRegularization: return "SingularAfterRegularization";
    case ErrorCode::NonNormalizedKernel: return "NonNormalizedKernel";
    case ErrorCode::OverlappingPriors: return "OverlappingPriors";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::TooFewNeighbors: return "TooFewNeighbors";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::EmptyTracklet: return "EmptyTracklet";
    case ErrorCode::UnassignedVertex: return "UnassignedVertex";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::vector<Index> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.front() < 0)
    throw Error(ErrorCode::OutOfRange, "IndexSet: negative index");
}

IndexSet::IndexSet(std::initializer_list<Index> members)
    : IndexSet(std::vector<Index>(members)) {}

IndexSet IndexSet::range(Index n) {
  std::vector<Index> m(static_cast<std::size_t>(std::max<Index>(n, 0)));
  for (Index i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = i;
  IndexSet s;
  s.members_ = std::move(m);
  return s;
}

bool IndexSet::contains(Index i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

IndexSet IndexSet::united(const IndexSet& other) const {
  IndexSet out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out.members_));
  return out;
}

IndexSet IndexSet::intersected(const IndexSet& other) const {
  IndexSet out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out.members_));
  return out;
}

IndexSet IndexSet::minus(const IndexSet& other) const {
  IndexSet out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out.members_));
  return out;
}

IndexSet IndexSet::complement(Index n) const { return IndexSet::range(n).minus(*this); }

// ---------------------------------------------------------------------------
// AffinityMatrix

namespace {

std::string at(Index i, Index j) {
  std::ostringstream os;
  os << "(row " << i << ", column " << j << ")";
  return os.str();
}

void check_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::NonSquare, os.str());
  }
}

void check_finite(const Eigen::MatrixXd& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j))) throw Error(ErrorCode::NonFinite, "entry " + at(i, j));
}

void check_strict(const Eigen::MatrixXd& m, double asymmetry_tol) {
  check_square(m);
  check_finite(m);
  const Index n = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Index i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) throw Error(ErrorCode::NonZeroDiagonal, "entry " + at(i, i));
    for (Index j = 0; j < n; ++j) {
      if (m(i, j) < 0.0) throw Error(ErrorCode::NegativeWeight, "entry " + at(i, j));
      if (j > i && std::abs(m(i, j) - m(j, i)) > asymmetry_tol * scale)
        throw Error(ErrorCode::AsymmetryExceedsTolerance, "entry " + at(i, j));
    }
  }
}

}  // namespace

AffinityMatrix::AffinityMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  check_strict(values_, 0.0);
}

AffinityMatrix AffinityMatrix::zeros(Index n) {
  if (n < 0) throw Error(ErrorCode::OutOfRange, "negative size");
  return AffinityMatrix(Eigen::MatrixXd::Zero(n, n), Trusted{});
}

AffinityMatrix AffinityMatrix::from_edges(Index n, const std::vector<Edge>& edges) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  for (const auto& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw Error(ErrorCode::OutOfRange, "edge " + at(e.i, e.j));
    if (e.i == e.j) throw Error(ErrorCode::NonZeroDiagonal, "self loop " + at(e.i, e.j));
    if (!std::isfinite(e.weight)) throw Error(ErrorCode::NonFinite, "edge " + at(e.i, e.j));
    if (e.weight < 0.0) throw Error(ErrorCode::NegativeWeight, "edge " + at(e.i, e.j));
    if (seen(e.i, e.j)) throw Error(ErrorCode::DuplicateEdge, "edge " + at(e.i, e.j));
    seen(e.i, e.j) = seen(e.j, e.i) = true;
    m(e.i, e.j) = m(e.j, e.i) = e.weight;
  }
  return AffinityMatrix(std::move(m), Trusted{});
}

AffinityMatrix AffinityMatrix::restricted(const IndexSet& rows) const {
  return AffinityMatrix(principal_submatrix(values_, rows), Trusted{});
}

AffinityMatrix make_trusted_affinity(Eigen::MatrixXd values) {
  return AffinityMatrix(std::move(values), AffinityMatrix::Trusted{});
}

AffinityBuild build_affinity(const Eigen::MatrixXd& raw, BuildMode mode, double asymmetry_tol) {
  if (mode == BuildMode::Strict) {
    check_strict(raw, asymmetry_tol);
    // Within tolerance; store the exactly symmetric version.
    Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
    return {make_trusted_affinity(std::move(sym)), 0.0};
  }
  check_square(raw);
  check_finite(raw);
  Eigen::MatrixXd sym = 0.5 * (raw + raw.transpose());
  sym.diagonal().setZero();
  sym = sym.cwiseMax(0.0);
  const double correction = raw.size() == 0 ? 0.0 : (sym - raw).cwiseAbs().maxCoeff();
  return {make_trusted_affinity(std::move(sym)), correction};
}

// ---------------------------------------------------------------------------
// SimplexVector

SimplexVector::SimplexVector(Eigen::VectorXd v) : x_(std::move(v)) {
  if (x_.size() == 0) throw Error(ErrorCode::ZeroSize, "empty simplex vector");
  for (Index i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_(i))) throw Error(ErrorCode::NonFinite, "simplex component");
    if (x_(i) < 0.0) throw Error(ErrorCode::NotOnSimplex, "negative component");
  }
  const double s = x_.sum();
  if (std::abs(s - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "components sum to " << s;
    throw Error(ErrorCode::NotOnSimplex, os.str());
  }
  x_ /= s;
}

SimplexVector SimplexVector::normalized(Eigen::VectorXd v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) < 0.0 && v(i) > -1e-12) v(i) = 0.0;
  }
  const double s = v.sum();
  if (!(s > 0.0)) throw Error(ErrorCode::NotOnSimplex, "vector has no positive mass");
  v /= s;
  return SimplexVector(std::move(v));
}

SimplexVector SimplexVector::vertex(Index n, Index i) {
  if (i < 0 || i >= n) throw Error(ErrorCode::OutOfRange, "vertex index");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(i) = 1.0;
  return SimplexVector(std::move(e));
}

SimplexVector barycenter(Index n) {
  if (n < 1) throw Error(ErrorCode::ZeroSize, "barycenter of an empty simplex");
  return SimplexVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

SimplexVector perturbed_barycenter(Index n, std::uint64_t seed, double magnitude) {
  if (n < 1) throw Error(ErrorCode::ZeroSize, "barycenter of an empty simplex");
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i)
    x(i) = 1.0 + magnitude * hash_unit(seed, static_cast<std::uint64_t>(i));
  return SimplexVector::normalized(std::move(x));
}

IndexSet support(const Eigen::VectorXd& x, double zero_tol) {
  std::vector<Index> s;
  for (Index i = 0; i < x.size(); ++i)
    if (x(i) > zero_tol) s.push_back(i);
  return IndexSet(std::move(s));
}

IndexSet support(const SimplexVector& x, double zero_tol) { return support(x.values(), zero_tol); }

IndexSet relative_support(const Eigen::VectorXd& x, double rel_tol) {
  if (x.size() == 0) return {};
  return support(x, rel_tol * x.maxCoeff());
}

Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& M, const IndexSet& rows) {
  const Index k = rows.size();
  Eigen::MatrixXd out(k, k);
  for (Index c = 0; c < k; ++c)
    for (Index r = 0; r < k; ++r) out(r, c) = M(rows[r], rows[c]);
  return out;
}

SimplexVector restrict_to(const Eigen::VectorXd& x, const IndexSet& rows) {
  Eigen::VectorXd local(rows.size());
  for (Index k = 0; k < rows.size(); ++k) local(k) = x(rows[k]);
  return SimplexVector::normalized(std::move(local));
}

Eigen::VectorXd scatter(const Eigen::VectorXd& local, const IndexSet& rows, Index n) {
  if (local.size() != rows.size())
    throw Error(ErrorCode::DimensionMismatch, "scatter: local vector length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Index k = 0; k < rows.size(); ++k) out(rows[k]) = local(k);
  return out;
}

}  // namespace domset
