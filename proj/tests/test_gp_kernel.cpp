#include <doctest.h>

#include <cmath>
#include <vector>

#include "netresp/errors.hpp"
#include "netresp/gp_kernel.hpp"
#include "support.hpp"

using namespace netresp;

TEST_CASE("squared exponential correlation") {
  const KernelParams kp{0.01, 1e-8};
  CHECK(sq_exp_corr(3.0, 3.0, kp) == 1.0);
  CHECK(sq_exp_corr(1.0, 2.0, kp) == doctest::Approx(0.990050).epsilon(1e-6));
  double prev = 1.0;
  for (double d = 0.5; d < 40.0; d += 0.5) {
    const double c = sq_exp_corr(0.0, d, kp);
    CHECK(c < prev);
    CHECK(sq_exp_corr(d, 0.0, kp) == c);
    prev = c;
  }
  CHECK_THROWS_AS((KernelParams{0.0, 1e-8}.validate()), InvalidArgument);
  CHECK_THROWS_AS((KernelParams{0.1, -1.0}.validate()), InvalidArgument);
}

TEST_CASE("build_covariance on small grids") {
  const KernelParams kp{0.01, 1e-8};
  const std::vector<double> one{0.0};
  const SpdMatrix c1 = build_covariance(one, kp);
  CHECK(c1.matrix.rows() == 1);
  CHECK(c1.matrix(0, 0) == doctest::Approx(1.0 + 1e-8).epsilon(1e-15));

  const std::vector<double> x{1.0, 2.0, 3.0};
  const SpdMatrix c = build_covariance(x, kp);
  CHECK(c.matrix(0, 1) == doctest::Approx(std::exp(-0.01)));
  CHECK(c.matrix(0, 2) == doctest::Approx(std::exp(-0.04)));
  CHECK(c.matrix(2, 1) == c.matrix(1, 2));
  for (int i = 0; i < 3; ++i) CHECK(c.matrix(i, i) == 1.0 + c.jitter);
  CHECK_THROWS_AS(build_covariance(std::vector<double>{2.0, 1.0}, kp), InvalidArgument);
}

TEST_CASE("build_covariance factorizes dense grids through jitter escalation") {
  for (double kappa : {1e-3, 1e-2, 1e-1}) {
    for (int m : {2, 15, 48, 100}) {
      std::vector<double> x;
      for (int j = 0; j < m; ++j) x.push_back(1.0 + j);
      const SpdMatrix c = build_covariance(x, KernelParams{kappa, 1e-8});
      CAPTURE(kappa);
      CAPTURE(m);
      CHECK(c.jitter >= 1e-8);
      CHECK(c.jitter <= 1e-4);
      CHECK(c.factor.llt().info() == Eigen::Success);
      CHECK((c.matrix - c.matrix.transpose()).norm() == 0.0);
      for (int j = 0; j < m; ++j) CHECK(c.matrix(j, j) == 1.0 + c.jitter);
    }
  }
}

TEST_CASE("build_covariance escalates from zero jitter on a near-singular grid") {
  std::vector<double> x;
  for (int j = 0; j < 200; ++j) x.push_back(0.05 * j);
  const Eigen::MatrixXd raw = build_covariance(x, KernelParams{0.1, 0.0}).matrix;
  const SpdMatrix c = build_covariance(x, KernelParams{0.1, 0.0});
  Eigen::MatrixXd bare = c.matrix;
  bare.diagonal().array() -= c.jitter;
  CHECK(Eigen::LLT<Eigen::MatrixXd>(bare).info() != Eigen::Success);
  CHECK(c.jitter >= 1e-8);
  CHECK(c.jitter <= 1e-4);
  CHECK(raw.rows() == 200);
}

TEST_CASE("hand-computed Cholesky factor") {
  Eigen::MatrixXd M(2, 2);
  M << 4, 2, 2, 3;
  const CholeskyFactor f = spd_factor(M);
  const Eigen::MatrixXd L = f.lower();
  CHECK(L(0, 0) == doctest::Approx(2.0));
  CHECK(L(0, 1) == 0.0);
  CHECK(L(1, 0) == doctest::Approx(1.0));
  CHECK(L(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK((L * L.transpose() - M).norm() < 1e-12);
}

TEST_CASE("identity factor and solve") {
  const CholeskyFactor f = spd_factor(Eigen::MatrixXd::Identity(4, 4));
  CHECK(f.lower().isIdentity());
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(4, -1, 2);
  CHECK(spd_solve(f, b).isApprox(b));
}

TEST_CASE("spd_factor errors") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(spd_factor(asym), InvalidArgument);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(spd_factor(indefinite), NumericalError);
}

TEST_CASE("covariance-form sampling reproduces mean and covariance") {
  Eigen::MatrixXd S(3, 3);
  S << 2.0, 0.6, -0.3, 0.6, 1.0, 0.2, -0.3, 0.2, 0.5;
  const Eigen::Vector3d mean(1.0, -2.0, 0.5);
  const CholeskyFactor f = spd_factor(S);
  RngStream rng(9);
  const int N = 10000;
  std::vector<Eigen::VectorXd> draws;
  for (int k = 0; k < N; ++k) draws.push_back(spd_sample_covariance(mean, f, rng));
  for (int a = 0; a < 3; ++a) {
    std::vector<double> xa;
    for (const auto& d : draws) xa.push_back(d(a));
    const auto m = testing::moments(xa);
    CHECK(std::abs(m.mean - mean(a)) < 5 * m.se);
    for (int b = 0; b < 3; ++b) {
      std::vector<double> prod;
      for (const auto& d : draws) prod.push_back((d(a) - mean(a)) * (d(b) - mean(b)));
      const auto p = testing::moments(prod);
      CHECK(std::abs(p.mean - S(a, b)) < 5 * p.se);
    }
  }
}

TEST_CASE("precision-form sampling targets N(P^-1 b, P^-1)") {
  Eigen::MatrixXd P(2, 2);
  P << 3.0, 1.0, 1.0, 2.0;
  const Eigen::Vector2d b(1.0, -1.0);
  const Eigen::MatrixXd S = P.inverse();
  const Eigen::VectorXd mu = S * b;
  RngStream rng(10);
  std::vector<double> x0, x1, x01;
  for (int k = 0; k < 20000; ++k) {
    const Eigen::VectorXd d = spd_sample_precision(P, b, rng);
    x0.push_back(d(0));
    x1.push_back(d(1));
    x01.push_back((d(0) - mu(0)) * (d(1) - mu(1)));
  }
  const auto m0 = testing::moments(x0), m1 = testing::moments(x1), m01 = testing::moments(x01);
  CHECK(std::abs(m0.mean - mu(0)) < 5 * m0.se);
  CHECK(std::abs(m1.mean - mu(1)) < 5 * m1.se);
  CHECK(std::abs(m0.variance - S(0, 0)) < 5 * testing::variance_se(x0));
  CHECK(std::abs(m01.mean - S(0, 1)) < 5 * m01.se);
}

TEST_CASE("a jitter-only covariance samples within O(sqrt(jitter)) of the mean") {
  const Eigen::MatrixXd S = 1e-10 * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::Vector3d mean(0.3, 0.4, 0.5);
  RngStream rng(2);
  const CholeskyFactor f = spd_factor(S);
  for (int k = 0; k < 100; ++k) CHECK((spd_sample_covariance(mean, f, rng) - mean).cwiseAbs().maxCoeff() < 1e-4);
}
