#include "fuzzybeta/beta_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuzzybeta/error.hpp"
#include "fuzzybeta/inference.hpp"
#include "fuzzybeta/kernels.hpp"
#include "fuzzybeta/special_functions.hpp"

namespace fuzzybeta {
namespace {

constexpr double kMuFloor = 1e-12;
constexpr double kLogPhiBound = 300.0;

Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& A, const Eigen::VectorXd& coef) {
  Eigen::VectorXd out(A.rows());
  kernels::active().linear_predictor(A.data(), static_cast<std::size_t>(A.rows()),
                                     static_cast<std::size_t>(A.cols()), coef.data(), out.data());
  return out;
}

Eigen::VectorXd transposed_product(const Eigen::MatrixXd& A, const Eigen::VectorXd& w) {
  Eigen::VectorXd out(A.cols());
  kernels::active().transposed_product(A.data(), static_cast<std::size_t>(A.rows()),
                                       static_cast<std::size_t>(A.cols()), w.data(), out.data());
  return out;
}

Eigen::MatrixXd weighted_cross(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::VectorXd& w) {
  Eigen::MatrixXd out(A.cols(), B.cols());
  kernels::active().weighted_cross(A.data(), static_cast<std::size_t>(A.cols()), B.data(),
                                   static_cast<std::size_t>(B.cols()),
                                   static_cast<std::size_t>(A.rows()), w.data(), out.data());
  return out;
}

void check_shapes(const Coefficients& coef, const DesignPair& design) {
  if (coef.beta.size() != design.J() || coef.gamma.size() != design.H()) {
    throw DomainError("coefficient lengths do not match the design (J=" +
                      std::to_string(design.J()) + ", H=" + std::to_string(design.H()) + ")");
  }
}

void check_stats(const Eigen::VectorXd& t1, const Eigen::VectorXd& t2, const DesignPair& design) {
  if (t1.size() != design.n() || t2.size() != design.n()) {
    throw DomainError("sufficient statistics do not match the number of rows");
  }
}

}  // namespace

DesignPair DesignPair::intercept_only(Eigen::Index n) {
  DesignPair d;
  d.X = Eigen::MatrixXd::Ones(n, 1);
  d.Z = Eigen::MatrixXd::Ones(n, 1);
  d.mean_names = {"(Intercept)"};
  d.precision_names = {"(Intercept)"};
  return d;
}

void DesignPair::validate() const {
  if (X.rows() != Z.rows()) throw DomainError("design: X and Z row counts differ");
  if (X.cols() < 1 || Z.cols() < 1) throw DomainError("design: need at least one column in X and Z");
  if (X.rows() < 1) throw DomainError("design: no rows");
  if (!X.allFinite() || !Z.allFinite()) throw DomainError("design: non-finite covariate values");
  if (!mean_names.empty() && static_cast<Eigen::Index>(mean_names.size()) != X.cols()) {
    throw DomainError("design: mean_names length does not match X");
  }
  if (!precision_names.empty() && static_cast<Eigen::Index>(precision_names.size()) != Z.cols()) {
    throw DomainError("design: precision_names length does not match Z");
  }
}

void DesignPair::check_rank() const {
  auto rank_of = [](const Eigen::MatrixXd& A) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    return qr.rank();
  };
  if (rank_of(X) < X.cols()) throw RankDeficientError("mean-part design X is rank deficient");
  if (rank_of(Z) < Z.cols()) throw RankDeficientError("precision-part design Z is rank deficient");
}

Eigen::VectorXd Coefficients::stacked() const {
  Eigen::VectorXd theta(size());
  theta << beta, gamma;
  return theta;
}

Coefficients Coefficients::unstack(const Eigen::VectorXd& theta, Eigen::Index J) {
  return {theta.head(J), theta.tail(theta.size() - J)};
}

double inverse_logit(double eta) {
  double mu;
  if (eta >= 0.0) {
    mu = 1.0 / (1.0 + std::exp(-eta));
  } else {
    const double e = std::exp(eta);
    mu = e / (1.0 + e);
  }
  return std::clamp(mu, kMuFloor, 1.0 - kMuFloor);
}

LinkedParams apply_links(const DesignPair& design, const Coefficients& coef) {
  check_shapes(coef, design);
  LinkedParams out;
  out.mu = linear_predictor(design.X, coef.beta);
  out.phi = linear_predictor(design.Z, coef.gamma);
  for (Eigen::Index i = 0; i < out.mu.size(); ++i) {
    out.mu[i] = inverse_logit(out.mu[i]);
    out.phi[i] = std::exp(std::clamp(out.phi[i], -kLogPhiBound, kLogPhiBound));
  }
  return out;
}

double beta_log_density(double y, double mu, double phi) {
  if (!(y > 0.0 && y < 1.0)) throw DomainError("beta density: y must lie in (0,1)");
  if (!(mu > 0.0 && mu < 1.0)) throw DomainError("beta density: mu must lie in (0,1)");
  if (!(phi > 0.0)) throw DomainError("beta density: phi must be positive");
  return complete_data_row(std::log(y), std::log1p(-y), mu, phi);
}

double complete_data_row(double t1, double t2, double mu, double phi) {
  const double a = mu * phi;
  const double b = (1.0 - mu) * phi;
  return (a - 1.0) * t1 + (b - 1.0) * t2 - log_beta(a, b);
}

double complete_data_loglik(const Coefficients& coef, const Eigen::VectorXd& t1,
                            const Eigen::VectorXd& t2, const DesignPair& design) {
  check_stats(t1, t2, design);
  const LinkedParams lp = apply_links(design, coef);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < design.n(); ++i) {
    try {
      sum += complete_data_row(t1[i], t2[i], lp.mu[i], lp.phi[i]);
    } catch (const DomainError& e) {
      throw RowDomainError(static_cast<std::size_t>(i), e.what());
    }
  }
  return sum;
}

RowGradients complete_data_row_gradients(const Coefficients& coef, const Eigen::VectorXd& t1,
                                         const Eigen::VectorXd& t2, const DesignPair& design) {
  check_stats(t1, t2, design);
  const LinkedParams lp = apply_links(design, coef);
  const Eigen::Index n = design.n();
  RowGradients g{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = lp.mu[i];
    const double phi = lp.phi[i];
    const double psi_a = digamma(mu * phi);
    const double psi_b = digamma((1.0 - mu) * phi);
    const double d_mu = phi * (t1[i] - t2[i] - psi_a + psi_b);
    const double d_phi = digamma(phi) - mu * psi_a - (1.0 - mu) * psi_b + mu * t1[i] +
                         (1.0 - mu) * t2[i];
    g.mean[i] = d_mu * mu * (1.0 - mu);
    g.precision[i] = d_phi * phi;
  }
  return g;
}

Eigen::VectorXd complete_data_score(const Coefficients& coef, const Eigen::VectorXd& t1,
                                    const Eigen::VectorXd& t2, const DesignPair& design) {
  const RowGradients g = complete_data_row_gradients(coef, t1, t2, design);
  Eigen::VectorXd score(coef.size());
  score << transposed_product(design.X, g.mean), transposed_product(design.Z, g.precision);
  return score;
}

Eigen::MatrixXd complete_data_hessian(const Coefficients& coef, const Eigen::VectorXd& t1,
                                      const Eigen::VectorXd& t2, const DesignPair& design) {
  check_stats(t1, t2, design);
  const LinkedParams lp = apply_links(design, coef);
  const Eigen::Index n = design.n();
  Eigen::VectorXd h11(n), h12(n), h22(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = lp.mu[i];
    const double phi = lp.phi[i];
    const double a = mu * phi;
    const double b = (1.0 - mu) * phi;
    const double psi_a = digamma(a);
    const double psi_b = digamma(b);
    const double tri_a = trigamma(a);
    const double tri_b = trigamma(b);
    const double d_mu = phi * (t1[i] - t2[i] - psi_a + psi_b);
    const double d_phi = digamma(phi) - mu * psi_a - (1.0 - mu) * psi_b + mu * t1[i] +
                         (1.0 - mu) * t2[i];
    const double d_mu_mu = -phi * phi * (tri_a + tri_b);
    const double d_mu_phi = t1[i] - t2[i] - psi_a + psi_b - phi * (mu * tri_a - (1.0 - mu) * tri_b);
    const double d_phi_phi = trigamma(phi) - mu * mu * tri_a - (1.0 - mu) * (1.0 - mu) * tri_b;
    const double dmu = mu * (1.0 - mu);
    h11[i] = d_mu_mu * dmu * dmu + d_mu * dmu * (1.0 - 2.0 * mu);
    h12[i] = d_mu_phi * dmu * phi;
    h22[i] = d_phi_phi * phi * phi + d_phi * phi;
  }
  const Eigen::Index J = design.J();
  const Eigen::Index H = design.H();
  Eigen::MatrixXd hess(J + H, J + H);
  hess.topLeftCorner(J, J) = weighted_cross(design.X, design.X, h11);
  hess.topRightCorner(J, H) = weighted_cross(design.X, design.Z, h12);
  hess.bottomLeftCorner(H, J) = hess.topRightCorner(J, H).transpose();
  hess.bottomRightCorner(H, H) = weighted_cross(design.Z, design.Z, h22);
  return hess;
}

Eigen::MatrixXd complete_data_row_scores(const Coefficients& coef, const Eigen::VectorXd& t1,
                                         const Eigen::VectorXd& t2, const DesignPair& design) {
  const RowGradients g = complete_data_row_gradients(coef, t1, t2, design);
  Eigen::MatrixXd rows(design.n(), coef.size());
  rows.leftCols(design.J()) = design.X.array().colwise() * g.mean.array();
  rows.rightCols(design.H()) = design.Z.array().colwise() * g.precision.array();
  return rows;
}

Coefficients solve_complete_data_score(const Eigen::VectorXd& t1, const Eigen::VectorXd& t2,
                                       const DesignPair& design, const Coefficients& init,
                                       const SolverConfig& cfg) {
  const Eigen::Index J = design.J();
  const VectorFunction F = [&](const Eigen::VectorXd& theta) {
    return complete_data_score(Coefficients::unstack(theta, J), t1, t2, design);
  };
  const JacobianFunction jac = [&](const Eigen::VectorXd& theta) {
    return complete_data_hessian(Coefficients::unstack(theta, J), t1, t2, design);
  };
  const NewtonResult root = damped_newton_root(F, jac, init.stacked(), cfg);
  return Coefficients::unstack(root.x, J);
}

namespace {

void check_interior(const Eigen::VectorXd& y) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0 && y[i] < 1.0)) {
      throw RowDomainError(static_cast<std::size_t>(i), "response must lie in (0,1)");
    }
  }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> log_stats(const Eigen::VectorXd& y) {
  check_interior(y);
  return {y.array().log().matrix(), y.unaryExpr([](double v) { return std::log1p(-v); })};
}

}  // namespace

double crisp_log_likelihood(const Coefficients& coef, const Eigen::VectorXd& y,
                            const DesignPair& design) {
  const auto [t1, t2] = log_stats(y);
  return complete_data_loglik(coef, t1, t2, design);
}

Eigen::VectorXd crisp_score(const Coefficients& coef, const Eigen::VectorXd& y,
                            const DesignPair& design) {
  const auto [t1, t2] = log_stats(y);
  return complete_data_score(coef, t1, t2, design);
}

Coefficients moment_start(const Eigen::VectorXd& y, const DesignPair& design) {
  check_interior(y);
  const Eigen::Index n = design.n();
  const Eigen::Index J = design.J();
  const Eigen::VectorXd z = y.unaryExpr([](double v) { return std::log(v / (1.0 - v)); });
  const Eigen::VectorXd beta = design.X.colPivHouseholderQr().solve(z);
  const Eigen::VectorXd fitted = design.X * beta;
  const Eigen::VectorXd resid = z - fitted;
  const double dof = static_cast<double>(n > J ? n - J : n);
  const double sigma2 = resid.squaredNorm() / dof;

  double phi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mu = inverse_logit(fitted[i]);
    const double v = mu * (1.0 - mu);
    // Delta method: Var(y) ~ sigma2 (mu (1 - mu))^2.
    phi += v / (sigma2 * v * v) - 1.0;
  }
  phi /= static_cast<double>(n);
  if (!std::isfinite(phi) || phi > 1e8) phi = 1e8;
  if (phi < 1e-2) phi = 1e-2;

  Coefficients start;
  start.beta = beta;
  start.gamma = Eigen::VectorXd::Zero(design.H());
  start.gamma[0] = std::log(phi);
  return start;
}

FitResult fit_crisp_ml(const Eigen::VectorXd& y, const DesignPair& design, const MlConfig& cfg) {
  design.validate();
  design.check_rank();
  if (y.size() != design.n()) throw DomainError("fit_crisp_ml: response length mismatch");
  const auto [t1, t2] = log_stats(y);

  FitResult fit;
  fit.estimator = "dML";
  fit.n_obs = design.n();
  fit.mean_names = design.mean_names;
  fit.precision_names = design.precision_names;
  fit.coefficients = solve_complete_data_score(t1, t2, design, moment_start(y, design), cfg.solver);
  fit.converged = true;
  fit.loglik = complete_data_loglik(fit.coefficients, t1, t2, design);
  fit.aic = aic(fit.loglik, fit.n_params());
  fit.initial_loglik = fit.loglik;
  fit.trace.push_back({fit.loglik, 0.0});

  const InformationMatrix info =
      information_from_scores(complete_data_row_scores(fit.coefficients, t1, t2, design));
  fit.std_errors = standard_errors(info, &fit.warnings);

  const LinkedParams lp = apply_links(design, fit.coefficients);
  fit.residuals.resize(design.n());
  for (Eigen::Index i = 0; i < design.n(); ++i) {
    const double mu = lp.mu[i];
    fit.residuals[i] = (y[i] - mu) / (mu * (1.0 - mu) / (1.0 + lp.phi[i]));
  }

  if (cfg.compute_pseudo_r2) {
    if (design.J() == 1 && design.H() == 1) {
      fit.null_loglik = fit.loglik;
    } else {
      MlConfig null_cfg = cfg;
      null_cfg.compute_pseudo_r2 = false;
      fit.null_loglik = fit_crisp_ml(y, DesignPair::intercept_only(design.n()), null_cfg).loglik;
    }
    fit.pseudo_r2 = pseudo_r2(fit.loglik, *fit.null_loglik, design.n(), &fit.warnings);
  }
  return fit;
}

}  // namespace fuzzybeta
