#pragma once

#include <functional>

namespace fuzzybeta {

// Integrand that also receives the exact distances of x to both ends of the
// integration range, so that factors like log(1 - y) stay accurate when the
// node sits within one ulp of an endpoint.
using GapIntegrand = std::function<double(double x, double gap_lo, double gap_hi)>;

struct QuadratureOptions {
  int initial_pieces = 8;
  int max_subintervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subintervals = 0;
  long evaluations = 0;
};

// Globally adaptive tanh-sinh quadrature. Each subinterval is integrated with
// the double-exponential rule (nodes never touch the interval ends, so
// integrable endpoint singularities are fine) and the subinterval with the
// largest error estimate is bisected until the summed estimate is <= tol.
// Throws AccuracyError (carrying the best estimate) when the subdivision
// budget runs out.
QuadratureResult integrate(const GapIntegrand& f, double lo, double hi, double tol,
                           const QuadratureOptions& options = {});

double adaptive_quadrature(const std::function<double(double)>& f, double lo, double hi,
                           double tol);

}  // namespace fuzzybeta
