#pragma once

// Special functions used by the beta model and its fuzzy extension.
//
// log_gamma, digamma and trigamma shift the argument upward with the
// recurrence until x >= 10 and then evaluate the asymptotic (Stirling)
// series truncated after the B_16 term. On [1e-3, 1e6] the absolute error
// of log_gamma is below 1e-12 wherever |log Gamma(x)| <= 1e3; beyond that
// the error is a few ulp of the result. digamma is accurate to ~1e-14.

namespace fuzzybeta {

double log_gamma(double x);
double digamma(double x);
double trigamma(double x);

// log B(p, q) = log_gamma(p) + log_gamma(q) - log_gamma(p + q).
double log_beta(double p, double q);

// Remainder of Stirling's formula:
//   log Gamma(x) = (x - 1/2) log x - x + log(2 pi)/2 + stirling_correction(x),
// valid for x >= 10.
double stirling_correction(double x);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
// Series for x < a + 1, modified Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x);

// Upper tail P(X >= statistic) of a chi-square variable with df degrees of freedom.
double chi_square_upper_tail(double statistic, double df);

}  // namespace fuzzybeta
