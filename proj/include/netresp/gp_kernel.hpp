#pragma once

#include <span>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "netresp/rng.hpp"

namespace netresp {

struct KernelParams {
  double kappa = 0.01;   // inverse squared length scale
  double jitter = 1e-8;  // first diagonal jitter tried by build_covariance

  void validate() const;
};

// exp(-kappa (xi - xj)^2)
double sq_exp_corr(double xi, double xj, const KernelParams& kp);

// Lower Cholesky factor L with L L^T = M.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  explicit CholeskyFactor(Eigen::LLT<Eigen::MatrixXd> llt) : llt_(std::move(llt)) {}

  Eigen::Index dimension() const { return llt_.rows(); }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Throws InvalidArgument when M is not symmetric and NumericalError when it is
// not numerically positive definite.
CholeskyFactor spd_factor(const Eigen::MatrixXd& M);

// M^{-1} b.
Eigen::VectorXd spd_solve(const CholeskyFactor& factor, const Eigen::VectorXd& b);

// Draw from N(mean, S) given the factor of S.
Eigen::VectorXd spd_sample_covariance(const Eigen::VectorXd& mean, const CholeskyFactor& covariance, RngStream& rng);

// Draw from N(P^{-1} b, P^{-1}) given the factor of the precision P and the
// linear term b. No inverse is formed.
Eigen::VectorXd spd_sample_precision(const CholeskyFactor& precision, const Eigen::VectorXd& linear, RngStream& rng);

// Convenience: factor P then sample as above.
Eigen::VectorXd spd_sample_precision(const Eigen::MatrixXd& precision, const Eigen::VectorXd& linear, RngStream& rng);

// Squared-exponential correlation matrix over a trait grid, with the smallest
// diagonal jitter from 1e-8, 1e-7, ..., 1e-4 (starting at kp.jitter) that
// factorizes.
struct SpdMatrix {
  Eigen::MatrixXd matrix;
  double jitter = 0.0;
  CholeskyFactor factor;
};

SpdMatrix build_covariance(std::span<const double> unique_x, const KernelParams& kp);

}  // namespace netresp
