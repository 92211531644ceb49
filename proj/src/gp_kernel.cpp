#include "netresp/gp_kernel.hpp"

#include <cmath>
#include <sstream>

#include "netresp/errors.hpp"

namespace netresp {

void KernelParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("kernel: kappa must be positive");
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw InvalidArgument("kernel: jitter must be non-negative");
}

double sq_exp_corr(double xi, double xj, const KernelParams& kp) {
  const double d = xi - xj;
  return std::exp(-kp.kappa * d * d);
}

CholeskyFactor spd_factor(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw InvalidArgument("spd_factor: matrix is not square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("spd_factor: matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw NumericalError("spd_factor: matrix is not positive definite");
  return CholeskyFactor(std::move(llt));
}

Eigen::VectorXd spd_solve(const CholeskyFactor& factor, const Eigen::VectorXd& b) {
  if (b.size() != factor.dimension()) throw InvalidArgument("spd_solve: dimension mismatch");
  return factor.llt().solve(b);
}

Eigen::VectorXd spd_sample_covariance(const Eigen::VectorXd& mean, const CholeskyFactor& covariance, RngStream& rng) {
  if (mean.size() != covariance.dimension()) throw InvalidArgument("spd_sample: dimension mismatch");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.normal();
  return mean + covariance.llt().matrixL() * z;
}

Eigen::VectorXd spd_sample_precision(const CholeskyFactor& precision, const Eigen::VectorXd& linear, RngStream& rng) {
  if (linear.size() != precision.dimension()) throw InvalidArgument("spd_sample: dimension mismatch");
  const auto& llt = precision.llt();
  Eigen::VectorXd mean = llt.solve(linear);
  Eigen::VectorXd z(linear.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = rng.normal();
  // L^T x = z gives x ~ N(0, P^{-1}).
  return mean + llt.matrixU().solve(z);
}

Eigen::VectorXd spd_sample_precision(const Eigen::MatrixXd& precision, const Eigen::VectorXd& linear, RngStream& rng) {
  return spd_sample_precision(spd_factor(precision), linear, rng);
}

SpdMatrix build_covariance(std::span<const double> unique_x, const KernelParams& kp) {
  kp.validate();
  const auto m = static_cast<Eigen::Index>(unique_x.size());
  if (m == 0) throw InvalidArgument("build_covariance: empty trait grid");
  for (Eigen::Index j = 1; j < m; ++j) {
    if (!(unique_x[j] > unique_x[j - 1])) throw InvalidArgument("build_covariance: traits must be strictly increasing");
  }
  Eigen::MatrixXd base(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) base(a, b) = sq_exp_corr(unique_x[a], unique_x[b], kp);
  }
  constexpr double kMaxJitter = 1e-4;
  double jitter = kp.jitter;
  while (true) {
    Eigen::MatrixXd C = base;
    C.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() == Eigen::Success) return {std::move(C), jitter, CholeskyFactor(std::move(llt))};
    if (jitter >= kMaxJitter) {
      std::ostringstream os;
      os << "build_covariance: factorization failed with jitter " << jitter;
      throw NumericalError(os.str());
    }
    jitter = jitter < 1e-8 ? 1e-8 : std::min(jitter * 10.0, kMaxJitter);
  }
}

}  // namespace netresp
