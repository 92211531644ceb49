#include "netresp/model.hpp"

#include <cmath>

#include "netresp/errors.hpp"
#include "netresp/polya_gamma.hpp"

namespace netresp {

void HyperParams::validate() const {
  if (!std::isfinite(mu_z)) throw InvalidArgument("mu_z must be finite");
  if (!(sigma2_z > 0.0) || !std::isfinite(sigma2_z)) throw InvalidArgument("sigma2_z must be positive");
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("a must be positive");
  if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("q must exceed 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be positive");
  if (R < 1 || K < 1) throw InvalidArgument("R and K must be at least 1");
}

double HyperParams::tau_shape(int k) const { return a * std::pow(q, 3.0 * k); }
double HyperParams::tau_rate(int k) const { return std::pow(q, 2.0 * k); }

double inverse_logit(double eta) {
  constexpr double kClamp = 35.0;
  if (eta > kClamp) eta = kClamp;
  if (eta < -kClamp) eta = -kClamp;
  return 1.0 / (1.0 + std::exp(-eta));
}

void LatentState::check_invariants() const {
  if (!Z.allFinite() || !G.allFinite() || !tau.allFinite() || !omega.allFinite()) {
    throw StateError("latent state has non-finite entries");
  }
  for (const auto& y : Y) {
    if (!y.allFinite()) throw StateError("latent coordinates have non-finite entries");
  }
  for (const auto& w : W) {
    if (!w.allFinite()) throw StateError("basis values have non-finite entries");
  }
  if ((tau.array() <= 0.0).any()) throw StateError("shrinkage rates must be positive");
  if ((omega.array() <= 0.0).any()) throw StateError("Polya-Gamma auxiliaries must be positive");
}

double linear_predictor(const LatentState& s, int i, std::size_t l, const EdgeIndexer& idx) {
  const auto [v, u] = idx.pair(l);
  return s.Z(static_cast<Eigen::Index>(l)) + s.Y[i].row(v).dot(s.Y[i].row(u));
}

double edge_probability(const LatentState& s, int i, std::size_t l, const EdgeIndexer& idx) {
  return inverse_logit(linear_predictor(s, i, l, idx));
}

double edge_probability(const LatentState& s, int i, std::size_t l) {
  const auto [v1, u1] = index_to_pair(l + 1, s.V);
  return inverse_logit(s.Z(static_cast<Eigen::Index>(l)) + s.Y[i].row(v1 - 1).dot(s.Y[i].row(u1 - 1)));
}

Eigen::VectorXd edge_probabilities(const LatentState& s, int i, const EdgeIndexer& idx) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(idx.edges()));
  for (std::size_t l = 0; l < idx.edges(); ++l) p(static_cast<Eigen::Index>(l)) = edge_probability(s, i, l, idx);
  return p;
}

double mean_function(const Eigen::MatrixXd& G, const std::vector<Eigen::MatrixXd>& W, int v, int r, int j) {
  return G.row(v).dot(W[j].col(r));
}

LatentState init_state(const HyperParams& hp, const NetworkDataset& ds, RngStream& rng, InitMode mode) {
  hp.validate();
  const int V = ds.nodes(), n = ds.subjects(), R = hp.R, K = hp.K;
  const auto L = static_cast<Eigen::Index>(ds.edges());
  const int m = static_cast<int>(ds.unique_traits().size());

  LatentState s;
  s.V = V;
  s.R = R;
  s.K = K;
  s.Z = Eigen::VectorXd::Constant(L, 0.0);
  s.Y.assign(n, Eigen::MatrixXd::Zero(V, R));
  s.G = Eigen::MatrixXd::Zero(V, K);
  s.W.assign(m, Eigen::MatrixXd::Zero(K, R));
  s.tau.resize(K);
  s.omega = Eigen::MatrixXd::Constant(n, L, 0.25);

  if (mode == InitMode::Zeros) {
    for (int k = 0; k < K; ++k) s.tau(k) = hp.tau_shape(k) / hp.tau_rate(k);
    s.Z.setConstant(hp.mu_z);
  } else {
    for (int k = 0; k < K; ++k) s.tau(k) = rng.gamma(hp.tau_shape(k), hp.tau_rate(k));
    for (int v = 0; v < V; ++v) {
      for (int k = 0; k < K; ++k) s.G(v, k) = rng.normal() / std::sqrt(s.tau(k));
    }
    const SpdMatrix C = build_covariance(ds.unique_traits(), hp.kernel());
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < K; ++k) {
      for (int r = 0; r < R; ++r) {
        const Eigen::VectorXd path = spd_sample_covariance(zero, C.factor, rng);
        for (int j = 0; j < m; ++j) s.W[j](k, r) = path(j);
      }
    }
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXd mu = s.G * s.W[ds.trait_index()[i]];
      for (int v = 0; v < V; ++v) {
        for (int r = 0; r < R; ++r) s.Y[i](v, r) = mu(v, r) + rng.normal();
      }
    }
    const double sd = std::sqrt(hp.sigma2_z);
    for (Eigen::Index l = 0; l < L; ++l) s.Z(l) = hp.mu_z + sd * rng.normal();
  }

  const EdgeIndexer idx(V);
  for (int i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < idx.edges(); ++l) {
      s.omega(i, static_cast<Eigen::Index>(l)) = pg_mean(linear_predictor(s, i, l, idx));
    }
  }
  return s;
}

void ChainConfig::validate() const {
  if (iterations < 1) throw InvalidArgument("iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations) throw InvalidArgument("burn_in must lie in [0, iterations)");
  if (thin < 1) throw InvalidArgument("thin must be at least 1");
}

int PosteriorDraws::add_draw() {
  probs.resize(probs.size() + static_cast<std::size_t>(subjects) * edges, 0.0);
  return draw_count++;
}

double predictive_mean(const PosteriorDraws& draws, int i, std::size_t l) {
  if (draws.draw_count == 0) throw StateError("predictive_mean: no retained draws");
  if (i < 0 || i >= draws.subjects || l >= draws.edges) throw InvalidArgument("predictive_mean: index out of range");
  double sum = 0.0;
  for (int d = 0; d < draws.draw_count; ++d) sum += draws.at(d, i, l);
  return sum / draws.draw_count;
}

}  // namespace netresp
