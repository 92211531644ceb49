#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "netresp/gp_kernel.hpp"
#include "netresp/model.hpp"
#include "netresp/network.hpp"
#include "netresp/rng.hpp"

namespace netresp {

// Everything about a chain that stays fixed across iterations.
struct SamplerContext {
  SamplerContext(const NetworkDataset& ds, const HyperParams& hp);

  const NetworkDataset& data;
  HyperParams hp;
  EdgeIndexer indexer;
  SpdMatrix covariance;              // GP correlation over the unique traits
  Eigen::MatrixXd covariance_inverse;
  Eigen::VectorXd replicates;        // subjects per unique trait
};

// Latent state plus the current value (observed or imputed) of every cell.
struct ChainState {
  LatentState latent;
  Eigen::MatrixXd response;  // n x L, entries 0 or 1
};

// Identifies the per-subject streams used by the parallel-safe updates: the
// draws for subject i in a given iteration depend only on (seed, iteration, i),
// never on how subjects are scheduled across workers.
struct SweepKey {
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;

  RngStream subject_stream(int subject, int phase) const;
};

// Initial state: init_state() plus missing cells drawn from Bernoulli(pi).
ChainState start_chain(const SamplerContext& ctx, RngStream& rng, InitMode mode = InitMode::Prior);

// omega_l^(i) ~ PG(1, Z_l + <Y_v^(i), Y_u^(i)>) for every cell, missing ones included.
void update_omega(ChainState& st, const SamplerContext& ctx, const SweepKey& key, int workers = 1);

// Row-blocked coordinate updates; rows of one subject are swept in node order.
void update_Y(ChainState& st, const SamplerContext& ctx, const SweepKey& key, int workers = 1);

void update_Z(ChainState& st, const SamplerContext& ctx, RngStream& rng);

// Joint draw of the K x n* basis values for each latent dimension r.
void update_W(ChainState& st, const SamplerContext& ctx, RngStream& rng);

void update_G(ChainState& st, const SamplerContext& ctx, RngStream& rng);

void update_tau(ChainState& st, const SamplerContext& ctx, RngStream& rng);

// Redraws every missing cell from Bernoulli(pi) under the current state.
void impute_missing(ChainState& st, const SamplerContext& ctx, RngStream& rng);

// omega -> Y -> Z -> W -> G -> tau -> imputation.
void gibbs_sweep(ChainState& st, const SamplerContext& ctx, RngStream& rng, const SweepKey& key, int workers = 1);

// Mean Bernoulli log-likelihood of the observed cells.
double observed_log_likelihood(const ChainState& st, const SamplerContext& ctx);

struct ChainOptions {
  int workers = 1;
  InitMode init = InitMode::Prior;
  std::filesystem::path checkpoint;  // empty: no checkpoints
  int checkpoint_every = 500;
  bool resume = false;               // continue from `checkpoint` when it exists
  int halt_after = 0;                // stop with ChainInterrupted after this iteration (0: never)
  std::string* log = nullptr;        // receives "iter=<t> loglik=<x>" every 100 iterations
};

class ChainInterrupted : public std::runtime_error {
 public:
  explicit ChainInterrupted(int iteration)
      : std::runtime_error("chain interrupted after iteration " + std::to_string(iteration)), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

// Runs the sampler and keeps thinned post-burn-in edge probabilities.
PosteriorDraws run_chain(const NetworkDataset& ds, const HyperParams& hp, const ChainConfig& cc,
                         const ChainOptions& options = {});

}  // namespace netresp
