// Independent reference implementations used only by the tests.
#ifndef DOMSET_TESTS_ORACLE_HPP
#define DOMSET_TESTS_ORACLE_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "domset/core.hpp"
#include "domset/random.hpp"

namespace oracle {

using domset::Index;

// Unmemoized weight recursion straight from the definition.
inline double weight(const Eigen::MatrixXd& A, const std::vector<Index>& S, Index i) {
  if (S.size() == 1) return 1.0;
  std::vector<Index> rest;
  for (Index v : S)
    if (v != i) rest.push_back(v);
  double w = 0.0;
  for (Index j : rest) {
    double awdeg = 0.0;
    for (Index k : rest) awdeg += A(j, k);
    awdeg /= static_cast<double>(rest.size());
    w += (A(j, i) - awdeg) * weight(A, rest, j);
  }
  return w;
}

inline bool dominant(const Eigen::MatrixXd& A, const std::vector<Index>& S) {
  for (Index i : S)
    if (!(weight(A, S, i) > 0.0)) return false;
  for (Index i = 0; i < A.rows(); ++i) {
    if (std::find(S.begin(), S.end(), i) != S.end()) continue;
    std::vector<Index> T = S;
    T.push_back(i);
    std::sort(T.begin(), T.end());
    if (!(weight(A, T, i) < 0.0)) return false;
  }
  return true;
}

// Symmetric, zero diagonal, entries uniform in [lo, hi).
inline Eigen::MatrixXd random_affinity(Index n, std::uint64_t seed, double lo = 0.0,
                                       double hi = 1.0) {
  domset::Rng rng(seed, domset::Stream::Test);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) A(i, j) = A(j, i) = rng.uniform(lo, hi);
  return A;
}

// Uniformly random interior point of the simplex.
inline Eigen::VectorXd random_simplex(Index n, domset::Rng& rng) {
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x(i) = -std::log(1.0 - rng.uniform());
  return x / x.sum();
}

// Five-vertex instance (0-based): triangle {0,1,2}, vertex 3 tied in
// with weights 30, 35, 41 and vertex 4 weakly attached with weight 1.
inline Eigen::MatrixXd five_vertex(Index n = 5) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(5, 5);
  auto set = [&](Index i, Index j, double w) { A(i, j) = A(j, i) = w; };
  set(0, 1, 20);
  set(0, 2, 21);
  set(1, 2, 22);
  set(3, 0, 30);
  set(3, 1, 35);
  set(3, 2, 41);
  for (Index i = 0; i < 4; ++i) set(4, i, 1);
  return A.topLeftCorner(n, n);
}

inline Eigen::MatrixXd k3() {
  Eigen::MatrixXd A = Eigen::MatrixXd::Ones(3, 3);
  A.diagonal().setZero();
  return A;
}

inline Eigen::MatrixXd two_edges() {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  A(0, 1) = A(1, 0) = 1.0;
  A(2, 3) = A(3, 2) = 1.0;
  return A;
}

inline Eigen::MatrixXd two_k3() {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
  A.topLeftCorner(3, 3) = k3();
  A.bottomRightCorner(3, 3) = k3();
  return A;
}

}  // namespace oracle

#endif  // DOMSET_TESTS_ORACLE_HPP
