#include <doctest.h>

#include <cmath>

#include "domset/affinity.hpp"
#include "oracle.hpp"

using namespace domset;

namespace {

Eigen::MatrixXd random_spd(Index d, Rng& rng) {
  Eigen::MatrixXd G(d, d);
  for (Index i = 0; i < d * d; ++i) G(i) = rng.normal();
  return G * G.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace

TEST_SUITE("affinity") {
  TEST_CASE("covariance_descriptor") {
    Eigen::MatrixXd same(3, 2);
    same << 1, 2, 1, 2, 1, 2;
    CHECK(covariance_descriptor(same).C.isZero());

    Eigen::MatrixXd two(2, 2);
    two << 0, 0, 2, 0;
    Eigen::Matrix2d expect;
    expect << 2, 0, 0, 0;
    CHECK(covariance_descriptor(two).C.isApprox(expect));

    Rng rng(1, Stream::Test);
    Eigen::MatrixXd pixels(50, 9);
    for (Index i = 0; i < pixels.size(); ++i) pixels(i) = rng.uniform();
    CHECK(covariance_descriptor(pixels).dim() == 9);

    try {
      covariance_descriptor(Eigen::MatrixXd::Ones(1, 3));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooFewSamples);
    }
  }

  TEST_CASE("covariance_distance") {
    Rng rng(2, Stream::Test);
    const Eigen::MatrixXd C = random_spd(4, rng);
    CHECK(covariance_distance(C, C) == doctest::Approx(0.0).epsilon(1e-12));
    for (Index d : {1, 3, 9}) {
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
      CHECK(std::abs(covariance_distance(I, 4 * I) - std::sqrt(double(d)) * std::log(4.0)) < 1e-10);
    }
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd A = random_spd(5, rng), B = random_spd(5, rng);
      Eigen::MatrixXd M(5, 5);
      for (Index i = 0; i < 25; ++i) M(i) = rng.normal();
      const double d = covariance_distance(A, B);
      CHECK(d >= 0.0);
      CHECK(std::abs(d - covariance_distance(B, A)) < 1e-10);
      CHECK(std::abs(d - covariance_distance(M.transpose() * A * M, M.transpose() * B * M)) < 1e-8);
    }
    // Rank-deficient input is regularized; the all-zero matrix cannot be.
    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK(std::isfinite(covariance_distance(singular, Eigen::MatrixXd::Identity(2, 2))));
    try {
      covariance_distance(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularAfterRegularization);
    }
  }

  TEST_CASE("joint distance and similarity") {
    CHECK(joint_distance(3, 4, 1, 1) == 5.0);
    CHECK(joint_distance(3, 4, 1, 1.25) == doctest::Approx(std::sqrt(9 + 20.0)));
    CHECK(similarity(0, 2) == 1.0);
    CHECK(similarity(8, 2) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(similarity(1, 0), Error);
  }

  TEST_CASE("kernel_trick_affinity") {
    Eigen::Matrix3d K;
    K << 1, 1, 0, 1, 1, 0.5, 0, 0.5, 1;
    const AffinityMatrix A = kernel_trick_affinity(K);
    CHECK(A(0, 1) == 1.0);
    CHECK(A(0, 2) == 0.0);
    CHECK(A(1, 2) == doctest::Approx(1 - std::sqrt(0.5)));
    CHECK(A(1, 1) == 0.0);
    K(2, 2) = 0.9;
    try {
      kernel_trick_affinity(K);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonNormalizedKernel);
    }
  }

  TEST_CASE("kernel trick is monotone and stays in [0,1]") {
    double prev = -1.0;
    for (int t = 0; t <= 20; ++t) {
      Eigen::Matrix2d K;
      K << 1, t / 20.0, t / 20.0, 1;
      const double a = kernel_trick_affinity(K)(0, 1);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
      CHECK(a >= prev);
      prev = a;
    }
  }

  TEST_CASE("laplacian kernel") {
    Eigen::MatrixXd X(3, 2);
    X << 0, 0, 1, 0, 1, 1;
    const Eigen::MatrixXd K = laplacian_kernel(X);
    CHECK(K.diagonal().isOnes());
    // L1 distances 1, 2, 1: median 1, gamma 1.
    CHECK(K(0, 2) == doctest::Approx(std::exp(-2.0)));
    CHECK(kernel_trick_affinity(K)(0, 1) > kernel_trick_affinity(K)(0, 2));
  }

  TEST_CASE("homogenize") {
    const AffinityMatrix K3(oracle::k3());
    CHECK(homogenize(K3, NodeScoreVector(Eigen::Vector3d::Zero())) == K3.values());
    const Eigen::MatrixXd B0 =
        homogenize(AffinityMatrix::zeros(3), NodeScoreVector(Eigen::Vector3d(1, 2, 3)));
    CHECK(quadratic_value(B0, barycenter(3).values()) == doctest::Approx(4.0));
    const Eigen::MatrixXd B = homogenize(K3, NodeScoreVector(Eigen::Vector3d(1, 0, 0)));
    CHECK(B(0, 0) == 2.0);
    CHECK(B(0, 1) == 2.0);
    CHECK(B(1, 2) == 1.0);
    CHECK_THROWS_AS(homogenize(K3, NodeScoreVector(Eigen::Vector2d(1, 1))), Error);
    CHECK_THROWS_AS(NodeScoreVector(Eigen::Vector2d(1, -1)), Error);
  }

  TEST_CASE("homogenization identity on random triples") {
    Rng rng(5, Stream::Test);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Index n = 2 + static_cast<Index>(rng.below(15));
      const AffinityMatrix A(oracle::random_affinity(n, seed));
      Eigen::VectorXd b(n);
      for (Index i = 0; i < n; ++i) b(i) = rng.uniform();
      const Eigen::VectorXd x = oracle::random_simplex(n, rng);
      const double lhs = quadratic_value(homogenize(A, NodeScoreVector(b)), x);
      CHECK(std::abs(lhs - (quadratic_value(A.values(), x) + 2 * b.dot(x))) <= 1e-12);
    }
  }

  TEST_CASE("tracklet affinities") {
    Rng rng(9, Stream::Test);
    const CovarianceDescriptor C{random_spd(3, rng)};
    CHECK(tracklet_affinity_mean({C}, {C}) == doctest::Approx(1.0));
    CHECK(tracklet_affinity_min({C}, {C}) == doctest::Approx(1.0));
    CHECK(tracklet_affinity_representative({C}, barycenter(1), {C}, barycenter(1)) ==
          doctest::Approx(1.0));

    // dist(I, e^{2/sqrt(3)} I) = 2 in three dimensions.
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
    const CovarianceDescriptor a{I}, b{std::exp(2 / std::sqrt(3.0)) * I};
    REQUIRE(covariance_distance(a, b) == doctest::Approx(2.0));
    CHECK(tracklet_affinity_mean({a, a}, {a, b}) == doctest::Approx(std::exp(-1.0)));
    CHECK(tracklet_affinity_min({a, a}, {a, b}) == doctest::Approx(std::exp(-1.0)));

    const CovarianceDescriptor far{100 * I};
    const SimplexVector peak(Eigen::Vector3d(0.2, 0.1, 0.7));
    CHECK(tracklet_affinity_representative({far, far, a}, peak, {a}, barycenter(1)) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(tracklet_affinity_mean({}, {a}), Error);

    const auto [h1, h2] = split_tracklet({a, a, b});
    CHECK(h1.size() == 2);
    CHECK(h2.size() == 1);
  }

  TEST_CASE("update_with_priors") {
    const AffinityMatrix A(oracle::random_affinity(4, 3));
    CHECK(update_with_priors(A, {}, {}).values() == A.values());
    const AffinityMatrix U = update_with_priors(A, {IndexSet{0, 1}}, {{0, 2}});
    CHECK(U(0, 1) == 1.0);
    CHECK(U(1, 0) == 1.0);
    CHECK(U(0, 2) == 0.0);
    CHECK(U(2, 3) == A(2, 3));
    // Forbidden pairs win over priors.
    CHECK(update_with_priors(A, {IndexSet{0, 1}}, {{1, 0}})(0, 1) == 0.0);
    try {
      update_with_priors(A, {IndexSet{0, 1}, IndexSet{1, 2}}, {});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OverlappingPriors);
    }
  }

  TEST_CASE("coassociation and consensus") {
    const auto same = coassociation({{0, 0, 1}, {0, 0, 1}, {0, 0, 1}});
    CHECK(same.values(0, 1) == 1.0);
    CHECK(same.values(0, 2) == 0.0);
    CHECK(same.ensemble_size == 3);

    const auto phi = coassociation({{0, 0, 1}, {0, 1, 1}, {0, 0, 0}});
    CHECK(phi.values(0, 1) == doctest::Approx(2.0 / 3));
    CHECK(phi.values(1, 2) == doctest::Approx(2.0 / 3));
    CHECK(phi.values(0, 2) == doctest::Approx(1.0 / 3));
    CHECK(phi.values(1, 1) == 0.0);

    const auto single = coassociation({{4, 4, 7, 7}});
    CHECK(single.values.values() == oracle::two_edges());
    const PeelResult r = consensus(single);
    REQUIRE(r.clusters.size() == 2);

    try {
      coassociation({{0, 1}, {0}});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
  }

  TEST_CASE("coassociation entries are multiples of 1/m") {
    Rng rng(4, Stream::Test);
    std::vector<std::vector<Index>> ens(7, std::vector<Index>(12));
    for (auto& l : ens)
      for (auto& v : l) v = static_cast<Index>(rng.below(3));
    const auto c = coassociation(ens);
    for (Index i = 0; i < 12; ++i)
      for (Index j = 0; j < 12; ++j) {
        const double k = c.values(i, j) * 7;
        CHECK(std::abs(k - std::round(k)) < 1e-12);
        CHECK(c.values(i, j) == c.values(j, i));
      }
  }
}
