#pragma once

// Monte Carlo harness for estimator recovery.
//
// Each replication draws a design (X, Z with Unif(1,5) covariates), crisp
// beta outcomes at the true coefficients, and fuzzy observations around them:
// s ~ Gamma(shape, rate) and m ~ Beta(y s, (1 - y) s). Each configured
// estimator is then fitted and its errors theta_hat - theta0 accumulated.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzybeta/beta_model.hpp"
#include "fuzzybeta/fuzzy_em.hpp"
#include "fuzzybeta/random.hpp"

namespace fuzzybeta {

enum class Estimator {
  fem,       // fuzzy EM on (m, s)
  dml_mean,  // crisp ML on centroid-defuzzified responses
  dml_mode,  // crisp ML on the modes (first maximum)
};

std::string estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name);  // throws UsageError

enum class SpreadConvention {
  shape_rate,   // s ~ Gamma(shape, rate): mean shape / rate
  shape_scale,  // s ~ Gamma(shape, scale): mean shape * scale
};

struct SimConfig {
  int n = 500;
  int J = 2;
  int H = 1;
  int B = 200;
  std::uint64_t seed = 20240501;
  Eigen::VectorXd true_beta;
  Eigen::VectorXd true_gamma;
  double gamma_shape = 1.025;
  double gamma_rate = 0.001;
  SpreadConvention spread_convention = SpreadConvention::shape_rate;
  std::vector<Estimator> estimators{Estimator::fem, Estimator::dml_mean, Estimator::dml_mode};
  EmConfig em;
  // One design shared by all replications instead of a fresh one each time.
  bool fixed_design = false;
  // Worker threads; 0 means FUZZYBETA_THREADS or the hardware concurrency.
  int threads = 0;
  // Keep per-replication records in the report.
  bool keep_replications = false;

  // Default true coefficients for J in {2, 4}, H in {1, 3}.
  static SimConfig standard_cell(int n, int J, int H, int B, std::uint64_t seed);
  void validate() const;  // throws DomainError
};

DesignPair generate_design(int n, int J, int H, Rng& rng);
Eigen::VectorXd generate_crisp_outcomes(const Eigen::VectorXd& mu, const Eigen::VectorXd& phi,
                                        Rng& rng);

struct FuzzifiedOutcomes {
  Eigen::VectorXd modes;
  Eigen::VectorXd spreads;
  long resamples = 0;  // degenerate draws that were redrawn
};

FuzzifiedOutcomes fuzzify(const Eigen::VectorXd& y, Rng& rng, double gamma_shape,
                          double gamma_rate,
                          SpreadConvention convention = SpreadConvention::shape_rate);

struct EstimatorRun {
  bool ok = false;
  std::string failure;
  Eigen::VectorXd estimate;    // stacked (beta, gamma)
  Eigen::VectorXd std_errors;
  bool converged = false;
  int iterations = 0;
  double loglik = 0.0;
  int dips = 0;                // log-likelihood decreases of any size
  double largest_dip = 0.0;
};

struct ReplicationRecord {
  int index = 0;
  long resamples = 0;
  std::vector<EstimatorRun> runs;  // parallel to SimConfig::estimators
};

struct BlockSummary {
  double bias = 0.0;          // mean error, averaged over the block's coefficients
  double rmse = 0.0;          // per-coefficient RMSE, averaged over the block
  double pooled_rmse = 0.0;   // sqrt of mean squared error over all block entries
  long positive = 0;          // errors >= 0 (ties counted as positive)
  long negative = 0;
  long zero = 0;
  Eigen::VectorXd coefficient_bias;
  Eigen::VectorXd coefficient_rmse;

  double ratio() const;       // positive / negative (inf when no negatives)
  double percent_positive() const;
};

struct EstimatorSummary {
  std::string estimator;
  int attempted = 0;
  int failures = 0;
  int non_converged = 0;
  BlockSummary beta;
  BlockSummary gamma;
  long total_dips = 0;
  double largest_dip = 0.0;
};

struct SimulationReport {
  int n = 0;
  int J = 0;
  int H = 0;
  int B = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd true_beta;
  Eigen::VectorXd true_gamma;
  long resamples = 0;
  std::vector<EstimatorSummary> estimators;
  std::vector<ReplicationRecord> replications;  // only with keep_replications

  const EstimatorSummary& summary(Estimator e) const;
};

// Fits every configured estimator on one replication.
ReplicationRecord run_replication(const SimConfig& cfg, int index,
                                  const DesignPair* shared_design = nullptr);

SimulationReport run_monte_carlo(const SimConfig& cfg);

// Summary of errors from a list of replication records (in that order).
SimulationReport summarize(const SimConfig& cfg, const std::vector<ReplicationRecord>& records);

int resolve_thread_count(int requested);

}  // namespace fuzzybeta
