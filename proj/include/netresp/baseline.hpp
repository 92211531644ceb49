#pragma once

#include <vector>

#include <Eigen/Dense>

#include "netresp/gp_kernel.hpp"
#include "netresp/model.hpp"
#include "netresp/network.hpp"
#include "netresp/rng.hpp"

namespace netresp {

// Independent GP-logit regression per edge: logit pi_l(.) ~ GP(mu_bar, sigma_bar c).
enum class PriorMean {
  PerEdge,  // each edge's own observed frequency at each unique trait
  Pooled,   // one frequency per unique trait, over all edges
};

struct BaselineConfig {
  double sigma_bar = 10.0;
  double kappa = 0.01;
  double clamp_eps = 0.0;  // <= 0: use 1 / (2 m + 2), m = mean subjects per unique trait
  PriorMean prior_mean = PriorMean::PerEdge;

  void validate() const;
  double resolved_clamp(const NetworkDataset& ds) const;
};

struct EmpiricalLogit {
  Eigen::VectorXd values;      // one entry per unique trait
  std::vector<bool> fallback;  // true where the trait had no observed value
};

// Per unique trait: logit of the observed frequency of edge l, clamped to
// [clamp_eps, 1 - clamp_eps]. Traits without an observed value use the
// all-trait frequency and are flagged.
EmpiricalLogit empirical_logit_mean(const NetworkDataset& ds, std::size_t l, double clamp_eps);

// Per unique trait: logit of the frequency of present edges among all
// observed cells of the subjects at that trait, clamped as above.
EmpiricalLogit pooled_logit_mean(const NetworkDataset& ds, double clamp_eps);

// Gibbs kernel for one edge's latent logit path over the unique traits.
class EdgeGpSampler {
 public:
  // prior_mean over unique traits; the prior covariance is sigma_bar * C.
  EdgeGpSampler(Eigen::VectorXd prior_mean, const SpdMatrix& correlation, double sigma_bar);

  // One sweep: omega_i ~ PG(1, f(x_i)) for each observation, then
  // f ~ N(P^{-1} b, P^{-1}) with P = (sigma_bar C)^{-1} + diag(sum omega) and
  // b = (sigma_bar C)^{-1} mu_bar + sum (y_i - 1/2). Observations are
  // (unique-trait index, 0/1 value) pairs; `omega` receives the PG draws.
  void sweep(Eigen::VectorXd& f, const std::vector<std::pair<int, double>>& obs, Eigen::VectorXd& omega,
             RngStream& rng) const;

  const Eigen::VectorXd& prior_mean() const { return prior_mean_; }

 private:
  Eigen::VectorXd prior_mean_;
  Eigen::MatrixXd prior_precision_;
  Eigen::VectorXd prior_linear_;
};

// Fits every edge independently (edge l uses its own stream) and reports
// pi_l(x_i) per subject in the same layout as run_chain. Missing cells are
// left out of that edge's likelihood.
PosteriorDraws fit_baseline(const NetworkDataset& ds, const BaselineConfig& bc, const ChainConfig& cc,
                            int workers = 1, std::vector<std::vector<bool>>* fallback_flags = nullptr);

}  // namespace netresp
