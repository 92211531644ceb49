#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netresp/gp_kernel.hpp"
#include "netresp/network.hpp"
#include "netresp/rng.hpp"

namespace netresp {

// Prior hyperparameters and latent dimensions.
struct HyperParams {
  double mu_z = 0.0;
  double sigma2_z = 10.0;
  double a = 2.0;
  double q = 2.0;
  double kappa = 0.01;
  int R = 5;  // latent space dimension
  int K = 5;  // dictionary size

  void validate() const;
  KernelParams kernel() const { return {kappa, 1e-8}; }
  // Gamma shape/rate of the prior on tau_k, k = 0..K-1 (0-based).
  double tau_shape(int k) const;
  double tau_rate(int k) const;
};

// Logistic map with the linear predictor clamped to +-35.
double inverse_logit(double eta);

// One full Gibbs state.
struct LatentState {
  int V = 0;
  int R = 0;
  int K = 0;
  Eigen::VectorXd Z;               // shared similarities, one per edge
  std::vector<Eigen::MatrixXd> Y;  // per subject, V x R coordinates
  Eigen::MatrixXd G;               // V x K dictionary weights
  std::vector<Eigen::MatrixXd> W;  // per unique trait, K x R basis values
  Eigen::VectorXd tau;             // K shrinkage rates
  Eigen::MatrixXd omega;           // n x L Polya-Gamma auxiliaries

  int subjects() const { return static_cast<int>(Y.size()); }
  std::size_t edges() const { return static_cast<std::size_t>(Z.size()); }
  int unique_traits() const { return static_cast<int>(W.size()); }

  // Throws StateError unless every entry is finite and tau, omega are positive.
  void check_invariants() const;
};

// Z_l + <Y_v, Y_u> for subject i and 0-based nodes v != u.
double linear_predictor(const LatentState& s, int i, std::size_t l, const EdgeIndexer& idx);

// pi_l^(i); l is the 0-based edge index.
double edge_probability(const LatentState& s, int i, std::size_t l, const EdgeIndexer& idx);
double edge_probability(const LatentState& s, int i, std::size_t l);

// All L edge probabilities of subject i.
Eigen::VectorXd edge_probabilities(const LatentState& s, int i, const EdgeIndexer& idx);

// mu_vr(x*_j) = sum_k G_vk W_kr(x*_j).
double mean_function(const Eigen::MatrixXd& G, const std::vector<Eigen::MatrixXd>& W, int v, int r, int j);

enum class InitMode { Prior, Zeros };

// Chain start. Prior mode draws tau, G, W, Y, Z from the prior in that order
// and sets omega to the PG mean of each implied tilt. Zeros mode sets every
// coordinate to 0, tau to its prior mean and omega to 1/4.
LatentState init_state(const HyperParams& hp, const NetworkDataset& ds, RngStream& rng,
                       InitMode mode = InitMode::Prior);

struct ChainConfig {
  int iterations = 5000;
  int burn_in = 1000;
  int thin = 4;
  std::uint64_t seed = 1;
  bool store_latents = false;

  void validate() const;
  // floor((iterations - burn_in) / thin)
  int retained() const { return (iterations - burn_in) / thin; }
  // Whether the state after 1-based iteration `it` is kept.
  bool keeps(int it) const { return it > burn_in && (it - burn_in) % thin == 0; }
};

struct ChainMetadata {
  std::string method;  // "network-response" or "baseline"
  ChainConfig chain;
  std::optional<HyperParams> hyper;
  double sigma_bar = 0.0;  // baseline only
  double baseline_kappa = 0.0;
  double clamp_eps = 0.0;
  double jitter = 0.0;
};

// Retained per-subject edge probability vectors, stored draw-major.
struct PosteriorDraws {
  int subjects = 0;
  std::size_t edges = 0;
  int draw_count = 0;
  std::vector<double> probs;  // [draw][subject][edge]
  ChainMetadata meta;
  std::vector<LatentState> latents;

  PosteriorDraws() = default;
  PosteriorDraws(int n, std::size_t L) : subjects(n), edges(L) {}

  double& at(int d, int i, std::size_t l) { return probs[(static_cast<std::size_t>(d) * subjects + i) * edges + l]; }
  double at(int d, int i, std::size_t l) const {
    return probs[(static_cast<std::size_t>(d) * subjects + i) * edges + l];
  }
  // Appends one zero-filled draw and returns its index.
  int add_draw();
};

// Held-out score: posterior mean of pi_l^(i) over the retained draws.
double predictive_mean(const PosteriorDraws& draws, int i, std::size_t l);

}  // namespace netresp
