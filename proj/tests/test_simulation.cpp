#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fuzzybeta/error.hpp"
#include "fuzzybeta/random.hpp"
#include "fuzzybeta/simulation.hpp"

using namespace fuzzybeta;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

SimConfig small_cell(int B) {
  SimConfig cfg = SimConfig::standard_cell(50, 2, 1, B, 777);
  cfg.keep_replications = true;
  return cfg;
}

}  // namespace

TEST_CASE("generator streams") {
  Rng a(1, 0), b(1, 0), c(1, 1), d(2, 0);
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 1000; ++k) {
    const std::uint64_t x = a.next();
    CHECK(x == b.next());
    seen.insert(x);
    seen.insert(c.next());
    seen.insert(d.next());
  }
  CHECK(seen.size() == 3000);
  Rng u(5, 5);
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 200000; ++k) {
    const double x = u.uniform();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("variate moments") {
  Rng rng(11, 3);
  const int n = 200000;
  std::vector<double> z(n), g(n), gs(n), b(n);
  for (int i = 0; i < n; ++i) {
    z[i] = rng.normal();
    g[i] = rng.gamma(2.5);
    gs[i] = rng.gamma(0.3);
    b[i] = rng.beta(2.0, 5.0);
  }
  CHECK(std::abs(mean(z)) < 5.0 / std::sqrt(n));
  CHECK(std::abs(variance(z) - 1.0) < 0.02);
  CHECK(std::abs(mean(g) - 2.5) < 5.0 * std::sqrt(2.5 / n));
  CHECK(std::abs(variance(g) - 2.5) < 0.1);
  CHECK(std::abs(mean(gs) - 0.3) < 5.0 * std::sqrt(0.3 / n));
  CHECK(std::abs(mean(b) - 2.0 / 7.0) < 0.002);
  CHECK(std::abs(variance(b) - 10.0 / (49.0 * 8.0)) < 0.001);
  // tiny shapes stay finite in log space
  for (int i = 0; i < 1000; ++i) CHECK(std::isfinite(rng.log_gamma_variate(1e-3)));
}

TEST_CASE("design generation") {
  Rng rng(3, 0);
  const DesignPair d = generate_design(100000, 4, 3, rng);
  CHECK(d.X.col(0).isOnes());
  CHECK(d.Z.col(0).isOnes());
  CHECK(d.X.rightCols(3).minCoeff() >= 1.0);
  CHECK(d.X.rightCols(3).maxCoeff() <= 5.0);
  CHECK(d.Z.rightCols(2).minCoeff() >= 1.0);
  CHECK(d.Z.rightCols(2).maxCoeff() <= 5.0);
  // Unif(1,5): mean 3, sd 4/sqrt(12)
  const double tol = 5.0 * (4.0 / std::sqrt(12.0)) / std::sqrt(100000.0);
  for (int j = 1; j < 4; ++j) CHECK(std::abs(d.X.col(j).mean() - 3.0) < tol);
  for (int h = 1; h < 3; ++h) CHECK(std::abs(d.Z.col(h).mean() - 3.0) < tol);
  CHECK(d.mean_names.front() == "(Intercept)");
  CHECK(d.mean_names.size() == 4);
}

TEST_CASE("crisp outcomes") {
  Rng rng(4, 0);
  const int n = 100000;
  const double mu = 0.3, phi = 8.0;
  const Eigen::VectorXd y =
      generate_crisp_outcomes(Eigen::VectorXd::Constant(n, mu), Eigen::VectorXd::Constant(n, phi), rng);
  CHECK(y.minCoeff() > 0.0);
  CHECK(y.maxCoeff() < 1.0);
  const double var = mu * (1.0 - mu) / (1.0 + phi);
  CHECK(std::abs(y.mean() - mu) < 5.0 * std::sqrt(var / n));
  const double sv = (y.array() - y.mean()).square().sum() / (n - 1);
  CHECK(std::abs(sv - var) < 0.02 * var);
}

TEST_CASE("fuzzification") {
  Rng rng(5, 0);
  const int n = 50000;
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(n, 0.5);
  // shape 1e8, rate 1e5: spreads pinned at 1000 to within 0.1
  const FuzzifiedOutcomes f = fuzzify(y, rng, 1e8, 1e5);
  CHECK(std::abs(f.spreads.mean() - 1000.0) < 0.1);
  const double sd = std::sqrt((f.modes.array() - f.modes.mean()).square().sum() / (n - 1));
  CHECK(std::abs(sd - std::sqrt(0.25 / 1001.0)) < 0.03 * 0.0158);
  CHECK(std::abs(f.modes.mean() - 0.5) < 5.0 * 0.0158 / std::sqrt(n));

  const FuzzifiedOutcomes g = fuzzify(y.head(20000), rng, 1.025, 0.001);
  CHECK(g.spreads.minCoeff() > 0.0);
  CHECK(std::abs(g.spreads.mean() - 1025.0) < 5.0 * std::sqrt(1.025) / 0.001 / std::sqrt(20000.0));
  CHECK(g.modes.minCoeff() > 0.0);
  CHECK(g.modes.maxCoeff() < 1.0);

  const FuzzifiedOutcomes h = fuzzify(y.head(2000), rng, 1.025, 0.001, SpreadConvention::shape_scale);
  CHECK(h.spreads.mean() < 0.01);
  CHECK_THROWS_AS(fuzzify(Eigen::VectorXd::Constant(2, 1.0), rng, 1.0, 1.0), DomainError);
}

TEST_CASE("configuration checks") {
  SimConfig cfg = SimConfig::standard_cell(100, 4, 3, 10, 1);
  CHECK(cfg.true_beta.size() == 4);
  CHECK(cfg.true_gamma.size() == 3);
  CHECK_NOTHROW(cfg.validate());
  cfg.B = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = SimConfig::standard_cell(100, 2, 1, 10, 1);
  cfg.true_gamma = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK(parse_estimator("dML-mean") == Estimator::dml_mean);
  CHECK(estimator_name(Estimator::fem) == "fEM");
  CHECK_THROWS_AS(parse_estimator("dREML"), UsageError);
}

TEST_CASE("a single replication is reproducible") {
  const SimConfig cfg = small_cell(1);
  const SimulationReport a = run_monte_carlo(cfg);
  const SimulationReport b = run_monte_carlo(cfg);
  REQUIRE(a.replications.size() == 1);
  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    CHECK(a.replications[0].runs[e].estimate == b.replications[0].runs[e].estimate);
    CHECK(a.estimators[e].beta.bias == b.estimators[e].beta.bias);
    CHECK(a.estimators[e].gamma.rmse == b.estimators[e].gamma.rmse);
  }
}

TEST_CASE("thread count does not change results") {
  SimConfig cfg = small_cell(6);
  cfg.threads = 1;
  const SimulationReport serial = run_monte_carlo(cfg);
  cfg.threads = 4;
  const SimulationReport parallel = run_monte_carlo(cfg);
  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    CHECK(serial.estimators[e].beta.bias == parallel.estimators[e].beta.bias);
    CHECK(serial.estimators[e].beta.rmse == parallel.estimators[e].beta.rmse);
    CHECK(serial.estimators[e].gamma.bias == parallel.estimators[e].gamma.bias);
    CHECK(serial.estimators[e].gamma.positive == parallel.estimators[e].gamma.positive);
  }
  for (int r = 0; r < 6; ++r) {
    CHECK(serial.replications[r].index == r);
    CHECK(serial.replications[r].runs[0].estimate == parallel.replications[r].runs[0].estimate);
  }
}

TEST_CASE("replications are exchangeable") {
  const SimConfig cfg = small_cell(8);
  const SimulationReport rep = run_monte_carlo(cfg);
  std::vector<ReplicationRecord> shuffled = rep.replications;
  std::mt19937_64 gen(9);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  const SimulationReport again = summarize(cfg, shuffled);
  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    CHECK(again.estimators[e].beta.bias == doctest::Approx(rep.estimators[e].beta.bias).epsilon(1e-12));
    CHECK(again.estimators[e].gamma.rmse == doctest::Approx(rep.estimators[e].gamma.rmse).epsilon(1e-12));
    CHECK(again.estimators[e].beta.positive == rep.estimators[e].beta.positive);
  }
  // Each replication depends only on its own index.
  const ReplicationRecord third = run_replication(cfg, 3);
  CHECK(third.runs[0].estimate == rep.replications[3].runs[0].estimate);
}

TEST_CASE("summary bookkeeping") {
  const SimConfig cfg = small_cell(8);
  const SimulationReport rep = run_monte_carlo(cfg);
  for (const EstimatorSummary& s : rep.estimators) {
    const int ok = s.attempted - s.failures;
    CHECK(s.beta.positive + s.beta.negative == static_cast<long>(ok) * cfg.J);
    CHECK(s.gamma.positive + s.gamma.negative == static_cast<long>(ok) * cfg.H);
    CHECK(s.beta.rmse >= 0.0);
    CHECK(s.beta.percent_positive() >= 0.0);
    CHECK(s.beta.percent_positive() <= 100.0);
    CHECK(s.beta.pooled_rmse >= std::abs(s.beta.bias) - 1e-15);
  }
  // The block bias is the mean of the raw errors.
  double sum = 0.0;
  for (const ReplicationRecord& r : rep.replications)
    sum += (r.runs[0].estimate.head(2) - cfg.true_beta).sum();
  CHECK(rep.summary(Estimator::fem).beta.bias ==
        doctest::Approx(sum / (2.0 * rep.replications.size())).epsilon(1e-12));
}

TEST_CASE("fixed design shares covariates across replications") {
  SimConfig cfg = small_cell(3);
  cfg.fixed_design = true;
  cfg.estimators = {Estimator::fem};
  const SimulationReport rep = run_monte_carlo(cfg);
  CHECK(rep.replications.size() == 3);
  CHECK(rep.replications[0].runs[0].estimate != rep.replications[1].runs[0].estimate);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  CHECK(resolve_thread_count(0) >= 1);
}
