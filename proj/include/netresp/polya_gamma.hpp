#pragma once

#include "netresp/rng.hpp"

namespace netresp {

enum class PgMethod {
  Exact,            // alternating-series rejection sampler (Devroye / Polson-Scott-Windle)
  TruncatedSeries,  // weighted sum of exponentials, first `series_terms` terms
};

// One draw from PG(1, c). Throws InvalidArgument for non-finite c.
double sample_pg1(double c, RngStream& rng);

// Same distribution through the selected method. The truncated series is only
// approximately PG(1, c); it is kept as an independent reference.
double sample_pg1(double c, RngStream& rng, PgMethod method, int series_terms = 200);

// E[PG(1, c)] = tanh(c/2) / (2c), with 1/4 at c = 0.
double pg_mean(double c);

// Var[PG(1, c)] = (sinh(c) - c) / (4 c^3 cosh^2(c/2)), with 1/24 at c = 0.
double pg_variance(double c);

}  // namespace netresp
