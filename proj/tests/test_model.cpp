#include <doctest.h>

#include <cmath>

#include "netresp/errors.hpp"
#include "netresp/model.hpp"
#include "netresp/polya_gamma.hpp"
#include "support.hpp"

using namespace netresp;

namespace {

NetworkDataset small_dataset(int V, const std::vector<double>& traits) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < traits.size(); ++i) ids.push_back("s" + std::to_string(i));
  std::vector<EdgeVector> nets(traits.size(), EdgeVector{V, std::vector<EdgeState>(edge_count(V), EdgeState::Absent)});
  return NetworkDataset(ids, traits, nets);
}

LatentState blank_state(int V, int n, int R, int K, int m) {
  LatentState s;
  s.V = V;
  s.R = R;
  s.K = K;
  s.Z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(edge_count(V)));
  s.Y.assign(n, Eigen::MatrixXd::Zero(V, R));
  s.G = Eigen::MatrixXd::Zero(V, K);
  s.W.assign(m, Eigen::MatrixXd::Zero(K, R));
  s.tau = Eigen::VectorXd::Ones(K);
  s.omega = Eigen::MatrixXd::Constant(n, s.Z.size(), 0.25);
  return s;
}

}  // namespace

TEST_CASE("edge_probability examples") {
  LatentState s = blank_state(2, 1, 1, 1, 1);
  CHECK(edge_probability(s, 0, 0) == 0.5);
  s.Y[0](1, 0) = 2.0;
  s.Y[0](0, 0) = 1.0;
  CHECK(edge_probability(s, 0, 0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));
  CHECK(edge_probability(s, 0, 0) == doctest::Approx(0.880797).epsilon(1e-6));
}

TEST_CASE("edge_probability is symmetric in the node pair and increasing in Z") {
  RngStream rng(3);
  LatentState s = blank_state(6, 2, 3, 2, 1);
  for (auto& Y : s.Y) {
    for (int k = 0; k < Y.size(); ++k) Y.data()[k] = rng.normal();
  }
  const EdgeIndexer idx(6);
  for (std::size_t l = 0; l < idx.edges(); ++l) {
    const auto [v, u] = idx.pair(l);
    const double direct = s.Z(static_cast<Eigen::Index>(l)) + s.Y[1].row(v).dot(s.Y[1].row(u));
    CHECK(linear_predictor(s, 1, l, idx) == doctest::Approx(s.Y[1].row(u).dot(s.Y[1].row(v)) + s.Z(l)));
    CHECK(linear_predictor(s, 1, l, idx) == doctest::Approx(direct));
  }
  double prev = 0.0;
  for (double z = -5; z <= 5; z += 0.5) {
    s.Z(3) = z;
    const double p = edge_probability(s, 0, 3, idx);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("probabilities stay strictly inside (0, 1) at extreme predictors") {
  CHECK(inverse_logit(1e6) < 1.0);
  CHECK(inverse_logit(-1e6) > 0.0);
  CHECK(inverse_logit(35.0) == inverse_logit(500.0));
  CHECK(inverse_logit(0.0) == 0.5);
}

TEST_CASE("mean_function matches a brute-force sum") {
  RngStream rng(5);
  const int V = 7, K = 5, R = 3, m = 4;
  Eigen::MatrixXd G(V, K);
  for (int k = 0; k < G.size(); ++k) G.data()[k] = rng.normal();
  std::vector<Eigen::MatrixXd> W(m, Eigen::MatrixXd(K, R));
  for (auto& w : W) {
    for (int k = 0; k < w.size(); ++k) w.data()[k] = rng.normal();
  }
  for (int v = 0; v < V; ++v) {
    for (int r = 0; r < R; ++r) {
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = 0; k < K; ++k) s += G(v, k) * W[j](k, r);
        CHECK(mean_function(G, W, v, r, j) == doctest::Approx(s).epsilon(1e-12));
      }
    }
  }
  CHECK(mean_function(Eigen::MatrixXd::Zero(V, K), W, 2, 1, 3) == 0.0);
  Eigen::MatrixXd G1 = Eigen::MatrixXd::Constant(1, 1, 2.0);
  std::vector<Eigen::MatrixXd> W1(1, Eigen::MatrixXd::Constant(1, 1, 3.0));
  CHECK(mean_function(G1, W1, 0, 0, 0) == 6.0);
}

TEST_CASE("HyperParams defaults and validation") {
  HyperParams hp;
  CHECK(hp.mu_z == 0.0);
  CHECK(hp.sigma2_z == 10.0);
  CHECK(hp.a == 2.0);
  CHECK(hp.q == 2.0);
  CHECK(hp.kappa == 0.01);
  CHECK(hp.R == 5);
  CHECK(hp.K == 5);
  hp.validate();
  for (int k = 0; k < 3; ++k) CHECK(hp.tau_shape(k) / hp.tau_rate(k) == doctest::Approx(2.0 * std::pow(2.0, k)));
  HyperParams bad = hp;
  bad.q = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = hp;
  bad.R = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = hp;
  bad.sigma2_z = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("prior tau means grow as a q^(k-1)") {
  HyperParams hp;
  hp.K = 3;
  const NetworkDataset ds = small_dataset(5, {1, 2, 3});
  RngStream rng(12);
  std::vector<std::vector<double>> tau(3);
  std::vector<std::vector<double>> gsd(3);
  for (int t = 0; t < 20000; ++t) {
    const LatentState s = init_state(hp, ds, rng);
    for (int k = 0; k < 3; ++k) {
      tau[k].push_back(s.tau(k));
      gsd[k].push_back(s.G(0, k) * s.G(0, k));
    }
  }
  double prev_g = INFINITY;
  for (int k = 0; k < 3; ++k) {
    const auto m = testing::moments(tau[k]);
    CHECK(std::abs(m.mean - 2.0 * std::pow(2.0, k)) < 3 * m.se);
    const double g2 = testing::moments(gsd[k]).mean;
    CHECK(g2 < prev_g);
    prev_g = g2;
  }
}

TEST_CASE("init_state is reproducible and well-formed") {
  HyperParams hp;
  const NetworkDataset ds = small_dataset(6, {1, 1, 4, 9});
  RngStream a(44), b(44);
  const LatentState s = init_state(hp, ds, a), t = init_state(hp, ds, b);
  CHECK(s.Z == t.Z);
  CHECK(s.G == t.G);
  CHECK(s.Y[3] == t.Y[3]);
  CHECK(s.W.size() == 3);
  CHECK(s.Y.size() == 4);
  CHECK(s.omega.rows() == 4);
  CHECK(s.omega.cols() == 15);
  s.check_invariants();
  const EdgeIndexer idx(6);
  for (int i = 0; i < 4; ++i) {
    for (std::size_t l = 0; l < idx.edges(); ++l) {
      CHECK(s.omega(i, static_cast<Eigen::Index>(l)) == doctest::Approx(pg_mean(linear_predictor(s, i, l, idx))));
    }
  }
}

TEST_CASE("near-degenerate Z prior pins Z to its mean") {
  HyperParams hp;
  hp.sigma2_z = 1e-12;
  hp.mu_z = 0.0;
  const NetworkDataset ds = small_dataset(5, {1, 2});
  RngStream rng(1);
  const LatentState s = init_state(hp, ds, rng);
  CHECK(s.Z.cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("zeros initialisation") {
  HyperParams hp;
  const NetworkDataset ds = small_dataset(4, {1, 2});
  RngStream rng(1);
  const LatentState s = init_state(hp, ds, rng, InitMode::Zeros);
  CHECK(s.G.isZero());
  CHECK(s.Y[1].isZero());
  CHECK(s.omega.isConstant(0.25));
  CHECK(s.tau(1) == doctest::Approx(4.0));
}

TEST_CASE("check_invariants catches bad states") {
  LatentState s = blank_state(3, 1, 1, 1, 1);
  s.check_invariants();
  s.tau(0) = 0.0;
  CHECK_THROWS_AS(s.check_invariants(), StateError);
  s.tau(0) = 1.0;
  s.Z(1) = NAN;
  CHECK_THROWS_AS(s.check_invariants(), StateError);
  s.Z(1) = 0.0;
  s.omega(0, 0) = -1.0;
  CHECK_THROWS_AS(s.check_invariants(), StateError);
}

TEST_CASE("ChainConfig retained count and keep rule") {
  ChainConfig cc;
  CHECK(cc.retained() == 1000);
  int kept = 0;
  for (int it = 1; it <= cc.iterations; ++it) kept += cc.keeps(it);
  CHECK(kept == 1000);
  CHECK_FALSE(cc.keeps(1000));
  CHECK(cc.keeps(1004));
  ChainConfig bad;
  bad.burn_in = 5000;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = ChainConfig{};
  bad.thin = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("predictive_mean averages draws") {
  PosteriorDraws d(1, 1);
  CHECK_THROWS_AS(predictive_mean(d, 0, 0), StateError);
  d.at(d.add_draw(), 0, 0) = 0.2;
  d.at(d.add_draw(), 0, 0) = 0.4;
  CHECK(predictive_mean(d, 0, 0) == doctest::Approx(0.3));
  PosteriorDraws same(2, 3);
  for (int k = 0; k < 5; ++k) {
    const int t = same.add_draw();
    for (int i = 0; i < 2; ++i) {
      for (std::size_t l = 0; l < 3; ++l) same.at(t, i, l) = 0.37;
    }
  }
  CHECK(predictive_mean(same, 1, 2) == doctest::Approx(0.37));
}
