#pragma once

// Fuzzy EM for the variable-dispersion beta model.
//
// Each observation is a beta fuzzy number (m_i, s_i) constraining a latent
// Beta(mu_i phi_i, (1 - mu_i) phi_i) response. The E-step replaces the
// complete-data sufficient statistics log y and log(1 - y) by their
// expectations under the conditional density xi_i(y) f(y) / int xi_i f,
// which is again a beta density Beta(eta_i, nu_i). The M-step solves the
// complete-data score equations at those filtered statistics.

#include <Eigen/Dense>
#include <utility>

#include "fuzzybeta/beta_model.hpp"

namespace fuzzybeta {

struct FuzzyDataset {
  Eigen::VectorXd modes;
  Eigen::VectorXd spreads;
  DesignPair design;

  Eigen::Index n() const { return modes.size(); }
  // Lengths, 0 < m < 1, s >= 0, design shapes. Throws DomainError.
  void validate() const;
};

struct FilteredData {
  Eigen::VectorXd y1_star;  // E[log Y | fuzzy obs]
  Eigen::VectorXd y2_star;  // E[log(1 - Y) | fuzzy obs]
};

enum class EStepVariant {
  taylor,         // second-order expansion around the conditional mean
  exact_digamma,  // psi(eta) - psi(eta + nu)
};

enum class EtaNuConvention {
  shifted,     // eta = mu phi + s m + 1, nu = phi (1 - mu) + s (1 - m) + 1
  consistent,  // no +1 terms: the exact product of membership and density
};

struct EmConfig {
  int max_em_iterations = 500;
  double q_tolerance = 1e-8;      // relative change of the fuzzy log-likelihood
  double param_tolerance = 1e-6;  // max absolute coefficient change
  EStepVariant estep_variant = EStepVariant::taylor;
  EtaNuConvention eta_nu_convention = EtaNuConvention::consistent;
  SolverConfig solver;
  // Log-likelihood decreases up to this size are tolerated (and counted);
  // larger ones are reported in FitResult::warnings.
  double dip_tolerance = 1e-6;
  // ...or stop the iteration with a SolverError when set.
  bool abort_on_large_dip = false;
  bool compute_pseudo_r2 = true;

  void validate() const;
};

std::pair<double, double> conditional_beta_params(double mu, double phi, double mode,
                                                  double spread, EtaNuConvention convention);

double expected_log_y(double eta, double nu, EStepVariant variant);
double expected_log_1my(double eta, double nu, EStepVariant variant);

FilteredData e_step(const Coefficients& coef, const FuzzyDataset& data, const EmConfig& cfg);

// Expected complete-data log-likelihood, all Gamma terms included.
double q_function(const Coefficients& coef, const FilteredData& filtered, const DesignPair& design);

Eigen::VectorXd q_score(const Coefficients& coef, const FilteredData& filtered,
                        const DesignPair& design);

Coefficients m_step(const FilteredData& filtered, const DesignPair& design,
                    const Coefficients& coef_init, const EmConfig& cfg);

// Observed-data log-likelihood, row i contributing
//   log B(mu phi + s m, phi (1 - mu) + s (1 - m)) - log B(mu phi, phi (1 - mu)) - log C_i.
double fuzzy_log_likelihood(const Coefficients& coef, const FuzzyDataset& data);
Eigen::VectorXd fuzzy_log_likelihood_rows(const Coefficients& coef, const FuzzyDataset& data);

// One row of the above, written to avoid cancellation when s is large.
double fuzzy_log_likelihood_row(double mu, double phi, double mode, double spread);

// Crisp ML on centroid-defuzzified responses.
Coefficients em_start(const FuzzyDataset& data, const SolverConfig& solver);

struct EmDiagnostics {
  int dips = 0;  // iterations whose log-likelihood fell by more than the noise floor
  double largest_dip = 0.0;
};

EmDiagnostics trace_diagnostics(const FitResult& fit, double noise_floor = 0.0);

// Full fit with standard errors, residuals, AIC and (optionally) pseudo-R2.
// Non-convergence returns the last iterate with converged = false.
FitResult fit_fuzzy_em(const FuzzyDataset& data, const EmConfig& cfg = {});

}  // namespace fuzzybeta
