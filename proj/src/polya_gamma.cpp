#include "netresp/polya_gamma.hpp"

#include <cmath>
#include <numbers>

#include "netresp/errors.hpp"

namespace netresp {

namespace {

using std::numbers::pi;

// Truncation point of the two-piece envelope for J*(1, z).
constexpr double kTrunc = 0.64;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// n-th coefficient of the alternating series for the J*(1) density, using the
// left (x <= t) or right (x > t) representation.
double series_coefficient(int n, double x) {
  const double h = n + 0.5;
  if (x <= kTrunc) {
    return pi * h * std::pow(2.0 / (pi * x), 1.5) * std::exp(-2.0 * h * h / x);
  }
  return pi * h * std::exp(-h * h * pi * pi * x / 2.0);
}

// Probability that the envelope proposes from the exponential (right) piece.
double right_piece_probability(double z) {
  const double k = pi * pi / 8.0 + z * z / 2.0;
  const double b = std::sqrt(1.0 / kTrunc) * (kTrunc * z - 1.0);
  const double a = -std::sqrt(1.0 / kTrunc) * (kTrunc * z + 1.0);
  const double x0 = std::log(k) + k * kTrunc;
  const double xb = x0 - z + std::log(normal_cdf(b));
  const double xa = x0 + z + std::log(normal_cdf(a));
  const double q_over_p = 4.0 / pi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + q_over_p);
}

// Inverse Gaussian IG(mu, 1) truncated to (0, kTrunc).
double truncated_inverse_gaussian(double z, RngStream& rng) {
  const double mu = 1.0 / z;
  if (mu > kTrunc) {
    // Envelope via a truncated 1/chi-square proposal.
    while (true) {
      double e1, e2;
      do {
        e1 = rng.exponential();
        e2 = rng.exponential();
      } while (e1 * e1 > 2.0 * e2 / kTrunc);
      const double x = kTrunc / ((1.0 + kTrunc * e1) * (1.0 + kTrunc * e1));
      if (rng.uniform() <= std::exp(-0.5 * z * z * x)) return x;
    }
  }
  while (true) {
    const double y = rng.normal();
    const double my = mu * y * y;
    double x = mu + 0.5 * mu * my - 0.5 * mu * std::sqrt(4.0 * my + my * my);
    if (rng.uniform() > mu / (mu + x)) x = mu * mu / x;
    if (x < kTrunc && x > 0.0) return x;
  }
}

double sample_exact(double c, RngStream& rng) {
  // PG(1, c) = J*(1, c/2) / 4.
  const double z = std::abs(c) * 0.5;
  const double k = pi * pi / 8.0 + z * z / 2.0;
  const double p_right = right_piece_probability(z);
  while (true) {
    double x;
    if (rng.uniform() < p_right) {
      x = kTrunc + rng.exponential() / k;
    } else {
      x = truncated_inverse_gaussian(z, rng);
    }
    double s = series_coefficient(0, x);
    const double y = rng.uniform() * s;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        s -= series_coefficient(n, x);
        if (y <= s) return 0.25 * x;
      } else {
        s += series_coefficient(n, x);
        if (y > s) break;
      }
    }
  }
}

double sample_series(double c, RngStream& rng, int terms) {
  const double c2 = c * c / (4.0 * pi * pi);
  double sum = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double h = k - 0.5;
    sum += rng.exponential() / (h * h + c2);
  }
  return sum / (2.0 * pi * pi);
}

}  // namespace

double sample_pg1(double c, RngStream& rng) { return sample_pg1(c, rng, PgMethod::Exact); }

double sample_pg1(double c, RngStream& rng, PgMethod method, int series_terms) {
  if (!std::isfinite(c)) throw InvalidArgument("sample_pg1: tilt must be finite");
  if (method == PgMethod::TruncatedSeries) {
    if (series_terms < 1) throw InvalidArgument("sample_pg1: series_terms must be positive");
    return sample_series(c, rng, series_terms);
  }
  return sample_exact(c, rng);
}

double pg_mean(double c) {
  if (!std::isfinite(c)) throw InvalidArgument("pg_mean: tilt must be finite");
  const double a = std::abs(c);
  if (a < 1e-4) return 0.25 - a * a / 48.0;
  return std::tanh(a / 2.0) / (2.0 * a);
}

double pg_variance(double c) {
  if (!std::isfinite(c)) throw InvalidArgument("pg_variance: tilt must be finite");
  const double a = std::abs(c);
  if (a < 1e-3) return 1.0 / 24.0 - a * a / 120.0;
  if (a > 50.0) return 1.0 / (2.0 * a * a * a);
  return (std::sinh(a) - a) / (2.0 * a * a * a * (std::cosh(a) + 1.0));
}

}  // namespace netresp
