#pragma once

// Variable-dispersion beta regression:
//
//   y_i ~ Beta(mu_i phi_i, (1 - mu_i) phi_i),
//   logit(mu_i) = x_i' beta,   log(phi_i) = z_i' gamma.
//
// The complete-data log-likelihood depends on y only through the sufficient
// statistics t1 = log y and t2 = log(1 - y); the same routines evaluate the
// EM Q function when t1, t2 are replaced by their conditional expectations.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "fuzzybeta/newton.hpp"

namespace fuzzybeta {

struct DesignPair {
  Eigen::MatrixXd X;  // n x J, mean part, first column ones
  Eigen::MatrixXd Z;  // n x H, precision part, first column ones
  std::vector<std::string> mean_names;
  std::vector<std::string> precision_names;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index J() const { return X.cols(); }
  Eigen::Index H() const { return Z.cols(); }

  // Intercept-only design with n rows.
  static DesignPair intercept_only(Eigen::Index n);

  // Shapes, finiteness and default names. Throws DomainError.
  void validate() const;
  // Full column rank of X and Z. Throws RankDeficientError.
  void check_rank() const;
};

struct Coefficients {
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;

  Eigen::Index size() const { return beta.size() + gamma.size(); }
  Eigen::VectorXd stacked() const;
  static Coefficients unstack(const Eigen::VectorXd& theta, Eigen::Index J);
};

struct LinkedParams {
  Eigen::VectorXd mu;
  Eigen::VectorXd phi;
};

// Saturating links: mu is kept in [1e-12, 1 - 1e-12], log phi in [-300, 300].
LinkedParams apply_links(const DesignPair& design, const Coefficients& coef);
double inverse_logit(double eta);

double beta_log_density(double y, double mu, double phi);

// Per-row complete-data log-likelihood terms for sufficient statistics (t1, t2).
double complete_data_row(double t1, double t2, double mu, double phi);

// Sum over rows for given sufficient statistics.
double complete_data_loglik(const Coefficients& coef, const Eigen::VectorXd& t1,
                            const Eigen::VectorXd& t2, const DesignPair& design);

// Derivatives of each row's term with respect to the two linear predictors.
struct RowGradients {
  Eigen::VectorXd mean;       // d l_i / d(x_i' beta)
  Eigen::VectorXd precision;  // d l_i / d(z_i' gamma)
};

RowGradients complete_data_row_gradients(const Coefficients& coef, const Eigen::VectorXd& t1,
                                         const Eigen::VectorXd& t2, const DesignPair& design);

// Gradient in (beta, gamma), stacked.
Eigen::VectorXd complete_data_score(const Coefficients& coef, const Eigen::VectorXd& t1,
                                    const Eigen::VectorXd& t2, const DesignPair& design);

// Hessian in (beta, gamma).
Eigen::MatrixXd complete_data_hessian(const Coefficients& coef, const Eigen::VectorXd& t1,
                                      const Eigen::VectorXd& t2, const DesignPair& design);

// n x (J + H) matrix whose rows are the per-observation scores.
Eigen::MatrixXd complete_data_row_scores(const Coefficients& coef, const Eigen::VectorXd& t1,
                                         const Eigen::VectorXd& t2, const DesignPair& design);

// Root of the complete-data score by damped Newton, warm-started at init.
Coefficients solve_complete_data_score(const Eigen::VectorXd& t1, const Eigen::VectorXd& t2,
                                       const DesignPair& design, const Coefficients& init,
                                       const SolverConfig& cfg);

double crisp_log_likelihood(const Coefficients& coef, const Eigen::VectorXd& y,
                            const DesignPair& design);
Eigen::VectorXd crisp_score(const Coefficients& coef, const Eigen::VectorXd& y,
                            const DesignPair& design);

// OLS of logit(y) on X for beta; gamma = (log of the moment precision, 0, ..., 0).
Coefficients moment_start(const Eigen::VectorXd& y, const DesignPair& design);

struct TraceEntry {
  double loglik;
  double max_param_change;
};

struct FitResult {
  std::string estimator;
  Coefficients coefficients;
  Eigen::VectorXd std_errors;
  double loglik = 0.0;
  double aic = 0.0;
  std::optional<double> pseudo_r2;
  std::optional<double> null_loglik;
  Eigen::VectorXd residuals;
  // Log-likelihood at the starting point, then one entry per iteration.
  double initial_loglik = 0.0;
  std::vector<TraceEntry> trace;
  bool converged = false;
  Eigen::Index n_obs = 0;
  std::vector<std::string> mean_names;
  std::vector<std::string> precision_names;
  std::vector<std::string> warnings;

  Eigen::Index n_params() const { return coefficients.size(); }
};

struct MlConfig {
  SolverConfig solver;
  bool compute_pseudo_r2 = false;
};

// Direct ML on crisp responses. Standard errors come from the sum of outer
// products of per-row scores; residuals are (y - mu) / (mu (1 - mu) / (1 + phi)).
FitResult fit_crisp_ml(const Eigen::VectorXd& y, const DesignPair& design,
                       const MlConfig& cfg = {});

}  // namespace fuzzybeta
