#include "netresp/baseline.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "netresp/errors.hpp"
#include "netresp/polya_gamma.hpp"
#include "parallel.hpp"

namespace netresp {

void BaselineConfig::validate() const {
  if (!(sigma_bar > 0.0) || !std::isfinite(sigma_bar)) throw InvalidArgument("sigma_bar must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("baseline kappa must be positive");
  if (clamp_eps >= 0.5) throw InvalidArgument("clamp_eps must be below 0.5");
}

double BaselineConfig::resolved_clamp(const NetworkDataset& ds) const {
  if (clamp_eps > 0.0) return clamp_eps;
  const double per_trait = static_cast<double>(ds.subjects()) / static_cast<double>(ds.unique_traits().size());
  return 1.0 / (2.0 * per_trait + 2.0);
}

EmpiricalLogit empirical_logit_mean(const NetworkDataset& ds, std::size_t l, double clamp_eps) {
  if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) throw InvalidArgument("clamp_eps must lie in (0, 0.5)");
  const auto m = static_cast<Eigen::Index>(ds.unique_traits().size());
  Eigen::VectorXd present = Eigen::VectorXd::Zero(m), seen = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < ds.subjects(); ++i) {
    const EdgeState e = ds.edge(i, l);
    if (e == EdgeState::Missing) continue;
    seen(ds.trait_index()[i]) += 1.0;
    present(ds.trait_index()[i]) += e == EdgeState::Present ? 1.0 : 0.0;
  }
  const double total_seen = seen.sum();
  const double global = total_seen > 0.0 ? present.sum() / total_seen : 0.5;
  auto clamped_logit = [clamp_eps](double p) {
    p = std::clamp(p, clamp_eps, 1.0 - clamp_eps);
    return std::log(p / (1.0 - p));
  };
  EmpiricalLogit out{Eigen::VectorXd(m), std::vector<bool>(static_cast<std::size_t>(m), false)};
  for (Eigen::Index j = 0; j < m; ++j) {
    if (seen(j) > 0.0) {
      out.values(j) = clamped_logit(present(j) / seen(j));
    } else {
      out.values(j) = clamped_logit(global);
      out.fallback[static_cast<std::size_t>(j)] = true;
    }
  }
  return out;
}

EmpiricalLogit pooled_logit_mean(const NetworkDataset& ds, double clamp_eps) {
  if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) throw InvalidArgument("clamp_eps must lie in (0, 0.5)");
  const auto m = static_cast<Eigen::Index>(ds.unique_traits().size());
  Eigen::VectorXd present = Eigen::VectorXd::Zero(m), seen = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < ds.subjects(); ++i) {
    for (std::size_t l = 0; l < ds.edges(); ++l) {
      const EdgeState e = ds.edge(i, l);
      if (e == EdgeState::Missing) continue;
      seen(ds.trait_index()[i]) += 1.0;
      present(ds.trait_index()[i]) += e == EdgeState::Present ? 1.0 : 0.0;
    }
  }
  const double total_seen = seen.sum();
  const double global = total_seen > 0.0 ? present.sum() / total_seen : 0.5;
  EmpiricalLogit out{Eigen::VectorXd(m), std::vector<bool>(static_cast<std::size_t>(m), false)};
  for (Eigen::Index j = 0; j < m; ++j) {
    double p = global;
    if (seen(j) > 0.0) p = present(j) / seen(j);
    else out.fallback[static_cast<std::size_t>(j)] = true;
    p = std::clamp(p, clamp_eps, 1.0 - clamp_eps);
    out.values(j) = std::log(p / (1.0 - p));
  }
  return out;
}

EdgeGpSampler::EdgeGpSampler(Eigen::VectorXd prior_mean, const SpdMatrix& correlation, double sigma_bar)
    : prior_mean_(std::move(prior_mean)) {
  const auto m = correlation.matrix.rows();
  prior_precision_ = correlation.factor.llt().solve(Eigen::MatrixXd::Identity(m, m)) / sigma_bar;
  prior_precision_ = 0.5 * (prior_precision_ + prior_precision_.transpose()).eval();
  prior_linear_ = prior_precision_ * prior_mean_;
}

void EdgeGpSampler::sweep(Eigen::VectorXd& f, const std::vector<std::pair<int, double>>& obs, Eigen::VectorXd& omega,
                          RngStream& rng) const {
  omega.resize(static_cast<Eigen::Index>(obs.size()));
  Eigen::MatrixXd precision = prior_precision_;
  Eigen::VectorXd linear = prior_linear_;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    const auto [j, y] = obs[k];
    const double w = sample_pg1(f(j), rng);
    omega(static_cast<Eigen::Index>(k)) = w;
    precision(j, j) += w;
    linear(j) += y - 0.5;
  }
  f = spd_sample_precision(precision, linear, rng);
}

PosteriorDraws fit_baseline(const NetworkDataset& ds, const BaselineConfig& bc, const ChainConfig& cc, int workers,
                            std::vector<std::vector<bool>>* fallback_flags) {
  bc.validate();
  cc.validate();
  const double eps = bc.resolved_clamp(ds);
  const SpdMatrix C = build_covariance(ds.unique_traits(), KernelParams{bc.kappa, 1e-8});
  const int n = ds.subjects();
  const std::size_t L = ds.edges();
  const int retained = cc.retained();

  PosteriorDraws draws(n, L);
  for (int d = 0; d < retained; ++d) draws.add_draw();
  if (fallback_flags) fallback_flags->assign(L, {});

  const bool pooled = bc.prior_mean == PriorMean::Pooled;
  const EmpiricalLogit shared = pooled ? pooled_logit_mean(ds, eps) : EmpiricalLogit{};
  detail::parallel_for(static_cast<int>(L), workers, [&](int edge) {
    const auto l = static_cast<std::size_t>(edge);
    const EmpiricalLogit mu = pooled ? shared : empirical_logit_mean(ds, l, eps);
    if (fallback_flags) (*fallback_flags)[l] = mu.fallback;
    const EdgeGpSampler sampler(mu.values, C, bc.sigma_bar);
    std::vector<std::pair<int, double>> obs;
    for (int i = 0; i < n; ++i) {
      const EdgeState e = ds.edge(i, l);
      if (e != EdgeState::Missing) obs.emplace_back(ds.trait_index()[i], e == EdgeState::Present ? 1.0 : 0.0);
    }
    RngStream rng(cc.seed, {0xba5e11e5ULL, static_cast<std::uint64_t>(l)});
    Eigen::VectorXd f = sampler.prior_mean();
    Eigen::VectorXd omega;
    int d = 0;
    for (int it = 1; it <= cc.iterations; ++it) {
      try {
        sampler.sweep(f, obs, omega, rng);
      } catch (const NumericalError& e) {
        throw NumericalError("baseline edge " + std::to_string(l + 1) + ", iteration " + std::to_string(it) + ": " +
                             e.what());
      }
      if (cc.keeps(it)) {
        for (int i = 0; i < n; ++i) draws.at(d, i, l) = inverse_logit(f(ds.trait_index()[i]));
        ++d;
      }
    }
  });
  spdlog::info("baseline: fitted {} edges", L);

  draws.meta.method = "baseline";
  draws.meta.chain = cc;
  draws.meta.sigma_bar = bc.sigma_bar;
  draws.meta.baseline_kappa = bc.kappa;
  draws.meta.clamp_eps = eps;
  draws.meta.jitter = C.jitter;
  return draws;
}

}  // namespace netresp
