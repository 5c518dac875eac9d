#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fuzzybeta/beta_model.hpp"
#include "fuzzybeta/error.hpp"
#include "fuzzybeta/quadrature.hpp"
#include "test_helpers.hpp"

using namespace fuzzybeta;
using namespace testing_support;

namespace {

// Straight transcription of the Gamma-function form, using std::lgamma.
double oracle_loglik(const Coefficients& c, const Eigen::VectorXd& y, const DesignPair& d) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    const double mu = 1.0 / (1.0 + std::exp(-d.X.row(i).dot(c.beta)));
    const double phi = std::exp(d.Z.row(i).dot(c.gamma));
    sum += std::lgamma(phi) - std::lgamma(mu * phi) - std::lgamma((1.0 - mu) * phi) +
           (mu * phi - 1.0) * std::log(y[i]) + ((1.0 - mu) * phi - 1.0) * std::log(1.0 - y[i]);
  }
  return sum;
}

}  // namespace

TEST_CASE("links") {
  DesignPair d = DesignPair::intercept_only(3);
  LinkedParams lp = apply_links(d, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)});
  CHECK(lp.mu[0] == 0.5);
  CHECK(lp.phi[0] == 1.0);
  lp = apply_links(d, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 4.8)});
  CHECK(lp.phi[0] == doctest::Approx(121.5104175).epsilon(1e-9));

  DesignPair d2;
  d2.X = Eigen::MatrixXd::Ones(1, 2);
  d2.Z = Eigen::MatrixXd::Ones(1, 1);
  lp = apply_links(d2, {(Eigen::VectorXd(2) << -0.5, -0.81).finished(), Eigen::VectorXd::Zero(1)});
  CHECK(lp.mu[0] == doctest::Approx(1.0 / (1.0 + std::exp(1.31))).epsilon(1e-14));
  CHECK(lp.mu[0] == doctest::Approx(0.2124).epsilon(1e-3));

  lp = apply_links(d, {Eigen::VectorXd::Constant(1, 1e6), Eigen::VectorXd::Constant(1, 1e6)});
  CHECK(std::isfinite(lp.mu[0]));
  CHECK(lp.mu[0] < 1.0);
  CHECK(std::isfinite(lp.phi[0]));
  lp = apply_links(d, {Eigen::VectorXd::Constant(1, -1e6), Eigen::VectorXd::Constant(1, -1e6)});
  CHECK(lp.mu[0] > 0.0);
  CHECK(lp.phi[0] > 0.0);
  CHECK_THROWS_AS(apply_links(d, {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(1)}),
                  DomainError);
}

TEST_CASE("links are monotone in beta") {
  std::mt19937_64 gen(4);
  const DesignPair d = random_design(gen, 50, 3, 1);
  Coefficients c = random_coefficients(gen, 3, 1);
  const LinkedParams before = apply_links(d, c);
  c.beta[2] += 0.3;
  const LinkedParams after = apply_links(d, c);
  for (Eigen::Index i = 0; i < d.n(); ++i) CHECK(after.mu[i] > before.mu[i]);
}

TEST_CASE("beta density") {
  CHECK(std::abs(beta_log_density(0.5, 0.5, 2.0)) <= 1e-14);
  CHECK(beta_log_density(0.5, 0.5, 4.0) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(beta_log_density(0.3, 0.2, 10.0) == doctest::Approx(0.5759687071189926660).epsilon(1e-13));
  CHECK_THROWS_AS(beta_log_density(0.0, 0.5, 2.0), DomainError);
  CHECK_THROWS_AS(beta_log_density(1.0, 0.5, 2.0), DomainError);
  CHECK_THROWS_AS(beta_log_density(0.5, 0.5, 0.0), DomainError);

  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> um(0.1, 0.9), up(2.5, 60.0);
  for (int k = 0; k < 20; ++k) {
    const double mu = um(gen), phi = up(gen);
    const double total = integrate(
        [&](double y, double glo, double ghi) {
          return std::exp(complete_data_row(std::log(glo), std::log(ghi), mu, phi));
        },
        0.0, 1.0, 1e-12).value;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("crisp log-likelihood against an independent transcription") {
  std::mt19937_64 gen(9);
  for (int k = 0; k < 50; ++k) {
    const int J = 1 + k % 4, H = 1 + k % 3;
    const DesignPair d = random_design(gen, 30, J, H);
    const Coefficients c = random_coefficients(gen, J, H);
    const LinkedParams lp = apply_links(d, c);
    const Eigen::VectorXd y = beta_sample(gen, lp.mu, lp.phi);
    const double ours = crisp_log_likelihood(c, y, d);
    CHECK(std::abs(ours - oracle_loglik(c, y, d)) <= 1e-10 * std::max(1.0, std::abs(ours)));
    double rows = 0.0;
    for (Eigen::Index i = 0; i < d.n(); ++i) rows += beta_log_density(y[i], lp.mu[i], lp.phi[i]);
    CHECK(ours == doctest::Approx(rows).epsilon(1e-13));
  }
}

TEST_CASE("uniform response gives zero log-likelihood") {
  const DesignPair d = DesignPair::intercept_only(1);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 0.5);
  CHECK(std::abs(crisp_log_likelihood({Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, std::log(2.0))}, y, d)) <= 1e-14);
}

TEST_CASE("log-likelihood is invariant to row order") {
  std::mt19937_64 gen(10);
  DesignPair d = random_design(gen, 40, 3, 2);
  const Coefficients c = random_coefficients(gen, 3, 2);
  const LinkedParams lp = apply_links(d, c);
  Eigen::VectorXd y = beta_sample(gen, lp.mu, lp.phi);
  const double l0 = crisp_log_likelihood(c, y, d);
  std::vector<int> perm(40);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  DesignPair dp = d;
  Eigen::VectorXd yp(40);
  for (int i = 0; i < 40; ++i) {
    dp.X.row(i) = d.X.row(perm[i]);
    dp.Z.row(i) = d.Z.row(perm[i]);
    yp[i] = y[perm[i]];
  }
  CHECK(crisp_log_likelihood(c, yp, dp) == doctest::Approx(l0).epsilon(1e-13));
}

TEST_CASE("scores and Hessian match finite differences") {
  std::mt19937_64 gen(12);
  for (int k = 0; k < 100; ++k) {
    const int J = 1 + k % 4, H = 1 + (k / 4) % 3;
    const DesignPair d = random_design(gen, 20, J, H);
    const Coefficients c = random_coefficients(gen, J, H);
    const LinkedParams lp = apply_links(d, c);
    const Eigen::VectorXd y = beta_sample(gen, lp.mu, lp.phi);
    const Eigen::VectorXd theta = c.stacked();

    auto ll = [&](const Eigen::VectorXd& th) {
      return crisp_log_likelihood(Coefficients::unstack(th, J), y, d);
    };
    const Eigen::VectorXd g = crisp_score(c, y, d);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      CHECK(std::abs(g[j] - fd_partial(ll, theta, j)) <= 1e-6 * scale);
    }

    // Hessian of the complete-data log-likelihood at arbitrary (t1, t2).
    Eigen::VectorXd t1 = y.array().log(), t2 = (1.0 - y.array()).log();
    t1.array() -= 0.05;
    const Eigen::MatrixXd hess = complete_data_hessian(c, t1, t2, d);
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      auto gj = [&](const Eigen::VectorXd& th) {
        return complete_data_score(Coefficients::unstack(th, J), t1, t2, d)[j];
      };
      const double hscale = std::max(1.0, hess.cwiseAbs().maxCoeff());
      for (Eigen::Index l = 0; l < theta.size(); ++l) {
        CHECK(std::abs(hess(j, l) - fd_partial(gj, theta, l)) <= 1e-6 * hscale);
      }
    }
    const Eigen::MatrixXd rows = complete_data_row_scores(c, t1, t2, d);
    CHECK((rows.colwise().sum().transpose() - complete_data_score(c, t1, t2, d)).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("crisp ML recovers simulated coefficients") {
  std::mt19937_64 gen(13);
  const DesignPair d = random_design(gen, 500, 2, 2);
  const Coefficients truth{(Eigen::VectorXd(2) << -0.5, -0.81).finished(),
                           (Eigen::VectorXd(2) << 3.0, 0.3).finished()};
  const LinkedParams lp = apply_links(d, truth);
  const Eigen::VectorXd y = beta_sample(gen, lp.mu, lp.phi);
  const FitResult fit = fit_crisp_ml(y, d);
  CHECK(fit.converged);
  REQUIRE(fit.std_errors.size() == 4);
  const Eigen::VectorXd err = fit.coefficients.stacked() - truth.stacked();
  for (Eigen::Index j = 0; j < 4; ++j) {
    INFO("coefficient " << j << " err " << err[j] << " se " << fit.std_errors[j]);
    CHECK(std::abs(err[j]) <= 3.0 * fit.std_errors[j]);
  }
  CHECK(crisp_score(fit.coefficients, y, d).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(fit.aic == doctest::Approx(2.0 * 4 - 2.0 * fit.loglik));

  // Restarting at the optimum stays there.
  const Coefficients again =
      solve_complete_data_score(y.array().log(), (1.0 - y.array()).log(), d, fit.coefficients, {});
  CHECK((again.stacked() - fit.coefficients.stacked()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("intercept-only ML mean is close to the sample mean") {
  std::mt19937_64 gen(14);
  const int n = 4000;
  const DesignPair d = DesignPair::intercept_only(n);
  const Eigen::VectorXd y =
      beta_sample(gen, Eigen::VectorXd::Constant(n, 0.35), Eigen::VectorXd::Constant(n, 30.0));
  const FitResult fit = fit_crisp_ml(y, d);
  const double mu = inverse_logit(fit.coefficients.beta[0]);
  CHECK(std::abs(mu - y.mean()) <= 1e-3);
}

TEST_CASE("design checks") {
  DesignPair d = DesignPair::intercept_only(5);
  d.X.conservativeResize(5, 2);
  d.X.col(1) = d.X.col(0) * 2.0;
  d.mean_names.push_back("dup");
  CHECK_THROWS_AS(d.check_rank(), RankDeficientError);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 0.4);
  CHECK_THROWS_AS(fit_crisp_ml(y, d), RankDeficientError);

  DesignPair bad = DesignPair::intercept_only(3);
  bad.Z = Eigen::MatrixXd::Ones(4, 1);
  CHECK_THROWS_AS(bad.validate(), DomainError);

  const DesignPair ok = DesignPair::intercept_only(3);
  Eigen::VectorXd yb(3);
  yb << 0.2, 1.0, 0.4;
  try {
    crisp_log_likelihood({Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)}, yb, ok);
    FAIL("expected a row error");
  } catch (const RowDomainError& e) {
    CHECK(e.row() == 1);
  }
}
