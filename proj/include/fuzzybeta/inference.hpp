#pragma once

// Post-fit inference: empirical information and standard errors, fuzzy
// standardized residuals, the likelihood-ratio pseudo-R2, likelihood-ratio
// tests between nested fits, and AIC.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fuzzybeta/beta_model.hpp"

namespace fuzzybeta {

struct FuzzyDataset;
struct FilteredData;

struct InformationMatrix {
  Eigen::MatrixXd matrix;
};

// Sum of outer products of the rows of `scores` (n x p).
InformationMatrix information_from_scores(const Eigen::MatrixXd& scores);

// Sum over rows of U_i U_i', U_i the row-i score of the Q function at coef_hat.
InformationMatrix empirical_information(const Coefficients& coef_hat, const FilteredData& filtered,
                                        const DesignPair& design);

// sqrt(diag(info^-1)). A numerically singular matrix is retried once with a
// 1e-10 ridge (a warning is appended to `warnings` when given); if that also
// fails, throws InferenceError.
Eigen::VectorXd standard_errors(const InformationMatrix& info,
                                std::vector<std::string>* warnings = nullptr);

// r_i = (m_i - mu_i)(1 - xi_i(mu_i)) / (mu_i (1 - mu_i) / (1 + phi_i)).
Eigen::VectorXd residuals(const Coefficients& coef, const FuzzyDataset& data);

struct Quartiles {
  double q1;
  double median;
  double q3;
};

// Linear-interpolation sample quantiles (R type 7).
Quartiles residual_quantiles(const Eigen::VectorXd& r);

// omega = 2 (l1 - l0), lambda = l0 / n, value -omega (1 - lambda) / ((omega + n) lambda),
// clamped to [0, 1] with a warning. Throws InferenceError when lambda == 0.
double pseudo_r2(double loglik_full, double loglik_null, Eigen::Index n,
                 std::vector<std::string>* warnings = nullptr);

struct LrtResult {
  double statistic;
  int df;
  double p_value;
};

// Plain chi-square reference. The statistic is floored at 0.
LrtResult likelihood_ratio_test(double loglik_full, double loglik_null, int df);

// Requires the null fit's mean and precision columns to be subsets of the
// full fit's (by name) and a positive parameter-count difference; otherwise
// throws UsageError.
LrtResult likelihood_ratio_test(const FitResult& full, const FitResult& null);

double aic(double loglik, Eigen::Index n_params);

}  // namespace fuzzybeta
