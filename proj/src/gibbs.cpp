#include "netresp/gibbs.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "netresp/draws_io.hpp"
#include "netresp/errors.hpp"
#include "netresp/polya_gamma.hpp"
#include "parallel.hpp"

namespace netresp {

namespace {

double response_value(EdgeState s) { return s == EdgeState::Present ? 1.0 : 0.0; }

}  // namespace

SamplerContext::SamplerContext(const NetworkDataset& ds, const HyperParams& hp_in)
    : data(ds), hp(hp_in), indexer(ds.nodes()), covariance(build_covariance(ds.unique_traits(), hp_in.kernel())) {
  hp.validate();
  const auto m = covariance.matrix.rows();
  covariance_inverse = covariance.factor.llt().solve(Eigen::MatrixXd::Identity(m, m));
  covariance_inverse = 0.5 * (covariance_inverse + covariance_inverse.transpose()).eval();
  const auto counts = ds.replicate_counts();
  replicates.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) replicates(j) = counts[j];
}

RngStream SweepKey::subject_stream(int subject, int phase) const {
  return RngStream(seed, {iteration, static_cast<std::uint64_t>(subject), static_cast<std::uint64_t>(phase)});
}

ChainState start_chain(const SamplerContext& ctx, RngStream& rng, InitMode mode) {
  const auto& ds = ctx.data;
  ChainState st{init_state(ctx.hp, ds, rng, mode), Eigen::MatrixXd::Zero(ds.subjects(), ds.edges())};
  for (int i = 0; i < ds.subjects(); ++i) {
    for (std::size_t l = 0; l < ds.edges(); ++l) {
      const EdgeState e = ds.edge(i, l);
      st.response(i, static_cast<Eigen::Index>(l)) =
          e == EdgeState::Missing ? static_cast<double>(rng.bernoulli(edge_probability(st.latent, i, l, ctx.indexer)))
                                  : response_value(e);
    }
  }
  return st;
}

void update_omega(ChainState& st, const SamplerContext& ctx, const SweepKey& key, int workers) {
  auto& s = st.latent;
  detail::parallel_for(s.subjects(), workers, [&](int i) {
    RngStream rng = key.subject_stream(i, 0);
    for (std::size_t l = 0; l < ctx.indexer.edges(); ++l) {
      s.omega(i, static_cast<Eigen::Index>(l)) = sample_pg1(linear_predictor(s, i, l, ctx.indexer), rng);
    }
  });
}

void update_Y(ChainState& st, const SamplerContext& ctx, const SweepKey& key, int workers) {
  auto& s = st.latent;
  const int V = s.V, R = s.R;
  detail::parallel_for(s.subjects(), workers, [&](int i) {
    RngStream rng = key.subject_stream(i, 1);
    Eigen::MatrixXd& Y = s.Y[i];
    const Eigen::MatrixXd& Wi = s.W[ctx.data.trait_index()[i]];
    Eigen::MatrixXd precision(R, R);
    Eigen::VectorXd linear(R);
    for (int v = 0; v < V; ++v) {
      precision.setIdentity();
      linear.noalias() = Wi.transpose() * s.G.row(v).transpose();
      const auto& nbrs = ctx.indexer.neighbours(v);
      const auto& edges = ctx.indexer.incident_edges(v);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const auto l = static_cast<Eigen::Index>(edges[k]);
        const double w = s.omega(i, l);
        const auto yu = Y.row(nbrs[k]).transpose();
        precision.selfadjointView<Eigen::Lower>().rankUpdate(yu, w);
        linear += (st.response(i, l) - 0.5 - w * s.Z(l)) * yu;
      }
      precision.triangularView<Eigen::StrictlyUpper>() = precision.transpose();
      try {
        Y.row(v) = spd_sample_precision(precision, linear, rng).transpose();
      } catch (const NumericalError& e) {
        throw NumericalError("update_Y: subject " + std::to_string(i + 1) + ", node " + std::to_string(v + 1) + ": " +
                             e.what());
      }
    }
  });
}

void update_Z(ChainState& st, const SamplerContext& ctx, RngStream& rng) {
  auto& s = st.latent;
  const double prior_precision = 1.0 / ctx.hp.sigma2_z;
  for (std::size_t l = 0; l < ctx.indexer.edges(); ++l) {
    const auto li = static_cast<Eigen::Index>(l);
    const auto [v, u] = ctx.indexer.pair(l);
    double precision = prior_precision;
    double linear = prior_precision * ctx.hp.mu_z;
    for (int i = 0; i < s.subjects(); ++i) {
      const double w = s.omega(i, li);
      precision += w;
      linear += st.response(i, li) - 0.5 - w * s.Y[i].row(v).dot(s.Y[i].row(u));
    }
    const double variance = 1.0 / precision;
    s.Z(li) = variance * linear + std::sqrt(variance) * rng.normal();
  }
}

void update_W(ChainState& st, const SamplerContext& ctx, RngStream& rng) {
  auto& s = st.latent;
  const int K = s.K, R = s.R, V = s.V;
  const auto m = static_cast<Eigen::Index>(s.W.size());
  const Eigen::MatrixXd gram = s.G.transpose() * s.G;

  // Kronecker-structured precision I_K (x) C^{-1} + G^T G (x) D, indexed by
  // (k, j) -> k * m + j.
  Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(K * m, K * m);
  for (int k = 0; k < K; ++k) {
    precision.block(k * m, k * m, m, m) += ctx.covariance_inverse;
    for (int k2 = 0; k2 < K; ++k2) {
      precision.block(k * m, k2 * m, m, m).diagonal() += gram(k, k2) * ctx.replicates;
    }
  }
  CholeskyFactor factor;
  try {
    factor = spd_factor(precision);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("update_W: ") + e.what());
  }

  Eigen::MatrixXd sums(V, m);  // per node, per unique trait: sum of Y_vr over replicates
  Eigen::VectorXd linear(K * m);
  for (int r = 0; r < R; ++r) {
    sums.setZero();
    for (int i = 0; i < s.subjects(); ++i) sums.col(ctx.data.trait_index()[i]) += s.Y[i].col(r);
    for (int k = 0; k < K; ++k) linear.segment(k * m, m) = sums.transpose() * s.G.col(k);
    const Eigen::VectorXd draw = spd_sample_precision(factor, linear, rng);
    for (int k = 0; k < K; ++k) {
      for (Eigen::Index j = 0; j < m; ++j) s.W[j](k, r) = draw(k * m + j);
    }
  }
}

void update_G(ChainState& st, const SamplerContext& ctx, RngStream& rng) {
  auto& s = st.latent;
  const int K = s.K, V = s.V;
  const auto m = static_cast<Eigen::Index>(s.W.size());
  Eigen::MatrixXd precision = s.tau.asDiagonal();
  for (Eigen::Index j = 0; j < m; ++j) precision.noalias() += ctx.replicates(j) * s.W[j] * s.W[j].transpose();
  precision = 0.5 * (precision + precision.transpose()).eval();
  CholeskyFactor factor;
  try {
    factor = spd_factor(precision);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("update_G: ") + e.what());
  }
  Eigen::VectorXd linear(K);
  for (int v = 0; v < V; ++v) {
    linear.setZero();
    for (int i = 0; i < s.subjects(); ++i) {
      linear.noalias() += s.W[ctx.data.trait_index()[i]] * s.Y[i].row(v).transpose();
    }
    s.G.row(v) = spd_sample_precision(factor, linear, rng).transpose();
  }
}

void update_tau(ChainState& st, const SamplerContext& ctx, RngStream& rng) {
  auto& s = st.latent;
  for (int k = 0; k < s.K; ++k) {
    const double shape = ctx.hp.tau_shape(k) + 0.5 * s.V;
    const double rate = ctx.hp.tau_rate(k) + 0.5 * s.G.col(k).squaredNorm();
    s.tau(k) = rng.gamma(shape, rate);
  }
}

void impute_missing(ChainState& st, const SamplerContext& ctx, RngStream& rng) {
  const auto& ds = ctx.data;
  for (int i = 0; i < ds.subjects(); ++i) {
    for (std::size_t l = 0; l < ds.edges(); ++l) {
      if (ds.edge(i, l) != EdgeState::Missing) continue;
      const double p = edge_probability(st.latent, i, l, ctx.indexer);
      st.response(i, static_cast<Eigen::Index>(l)) = rng.bernoulli(p) ? 1.0 : 0.0;
    }
  }
}

void gibbs_sweep(ChainState& st, const SamplerContext& ctx, RngStream& rng, const SweepKey& key, int workers) {
  update_omega(st, ctx, key, workers);
  update_Y(st, ctx, key, workers);
  update_Z(st, ctx, rng);
  update_W(st, ctx, rng);
  update_G(st, ctx, rng);
  update_tau(st, ctx, rng);
  impute_missing(st, ctx, rng);
}

double observed_log_likelihood(const ChainState& st, const SamplerContext& ctx) {
  const auto& ds = ctx.data;
  double total = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < ds.subjects(); ++i) {
    for (std::size_t l = 0; l < ds.edges(); ++l) {
      const EdgeState e = ds.edge(i, l);
      if (e == EdgeState::Missing) continue;
      const double p = edge_probability(st.latent, i, l, ctx.indexer);
      total += e == EdgeState::Present ? std::log(p) : std::log1p(-p);
      ++count;
    }
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

namespace {

constexpr char kCheckpointMagic[9] = "NRCHKPT1";

std::string chain_fingerprint(const NetworkDataset& ds, const HyperParams& hp, const ChainConfig& cc) {
  nlohmann::json j{{"V", ds.nodes()}, {"n", ds.subjects()}, {"hyper", hp}, {"chain", cc}};
  return j.dump();
}

struct Checkpoint {
  int iteration = 0;
  std::string rng_state;
  ChainState state;
  PosteriorDraws draws;
  std::string log;
};

void write_checkpoint(const std::filesystem::path& path, const std::string& fingerprint, const Checkpoint& cp) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ValidationError("cannot write checkpoint " + tmp.string());
    out.write(kCheckpointMagic, 8);
    binary::write_string(out, fingerprint);
    binary::write_u64(out, static_cast<std::uint64_t>(cp.iteration));
    binary::write_string(out, cp.rng_state);
    binary::write_state(out, cp.state.latent);
    binary::write_matrix(out, cp.state.response);
    binary::write_u64(out, static_cast<std::uint64_t>(cp.draws.draw_count));
    binary::write_doubles(out, cp.draws.probs.data(), cp.draws.probs.size());
    binary::write_u64(out, cp.draws.latents.size());
    for (const auto& s : cp.draws.latents) binary::write_state(out, s);
    binary::write_string(out, cp.log);
    if (!out) throw ValidationError("checkpoint write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path, const std::string& fingerprint, int n, std::size_t L) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != std::string(kCheckpointMagic, 8)) {
    throw ParseError(path.string() + ": not a chain checkpoint", 0);
  }
  if (binary::read_string(in) != fingerprint) {
    throw StateError("checkpoint " + path.string() + " was written for a different dataset or configuration");
  }
  Checkpoint cp;
  cp.iteration = static_cast<int>(binary::read_u64(in));
  cp.rng_state = binary::read_string(in);
  cp.state.latent = binary::read_state(in);
  cp.state.response = binary::read_matrix(in);
  cp.draws = PosteriorDraws(n, L);
  const auto count = binary::read_u64(in);
  for (std::uint64_t d = 0; d < count; ++d) cp.draws.add_draw();
  binary::read_doubles(in, cp.draws.probs.data(), cp.draws.probs.size());
  cp.draws.latents.resize(binary::read_u64(in));
  for (auto& s : cp.draws.latents) s = binary::read_state(in);
  cp.log = binary::read_string(in);
  return cp;
}

std::string log_line(int iteration, double loglik) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "iter=%d loglik=%.6f\n", iteration, loglik);
  return buf;
}

}  // namespace

PosteriorDraws run_chain(const NetworkDataset& ds, const HyperParams& hp, const ChainConfig& cc,
                         const ChainOptions& options) {
  cc.validate();
  hp.validate();
  const SamplerContext ctx(ds, hp);
  const std::string fingerprint = chain_fingerprint(ds, hp, cc);

  Checkpoint cp;
  RngStream rng(cc.seed, 0);
  bool resumed = false;
  if (options.resume && !options.checkpoint.empty() && std::filesystem::exists(options.checkpoint)) {
    cp = read_checkpoint(options.checkpoint, fingerprint, ds.subjects(), ds.edges());
    rng = RngStream::deserialize(cp.rng_state);
    resumed = true;
    spdlog::info("resuming chain from iteration {}", cp.iteration);
  }
  if (!resumed) {
    cp.state = start_chain(ctx, rng, options.init);
    cp.draws = PosteriorDraws(ds.subjects(), ds.edges());
  }

  for (int it = cp.iteration + 1; it <= cc.iterations; ++it) {
    try {
      gibbs_sweep(cp.state, ctx, rng, SweepKey{cc.seed, static_cast<std::uint64_t>(it)}, options.workers);
    } catch (const NumericalError& e) {
      throw NumericalError("iteration " + std::to_string(it) + ": " + e.what());
    }
    if (cc.keeps(it)) {
      const int d = cp.draws.add_draw();
      for (int i = 0; i < ds.subjects(); ++i) {
        for (std::size_t l = 0; l < ds.edges(); ++l) {
          cp.draws.at(d, i, l) = edge_probability(cp.state.latent, i, l, ctx.indexer);
        }
      }
      if (cc.store_latents) cp.draws.latents.push_back(cp.state.latent);
    }
    if (it % 100 == 0) {
      const double ll = observed_log_likelihood(cp.state, ctx);
      cp.log += log_line(it, ll);
      spdlog::debug("iteration {} mean observed log-likelihood {:.6f}", it, ll);
    }
    if (it % 500 == 0) spdlog::info("iteration {}/{}", it, cc.iterations);
    cp.iteration = it;
    if (!options.checkpoint.empty() && options.checkpoint_every > 0 && it % options.checkpoint_every == 0 &&
        it < cc.iterations) {
      cp.rng_state = rng.serialize();
      write_checkpoint(options.checkpoint, fingerprint, cp);
    }
    if (options.halt_after > 0 && it == options.halt_after && it < cc.iterations) throw ChainInterrupted(it);
  }

  if (options.log) *options.log = cp.log;
  if (!options.checkpoint.empty()) std::filesystem::remove(options.checkpoint);
  PosteriorDraws out = std::move(cp.draws);
  out.meta.method = "network-response";
  out.meta.chain = cc;
  out.meta.hyper = hp;
  out.meta.jitter = ctx.covariance.jitter;
  return out;
}

}  // namespace netresp
