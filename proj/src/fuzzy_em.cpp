#include "fuzzybeta/fuzzy_em.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fuzzybeta/error.hpp"
#include "fuzzybeta/fuzzy_number.hpp"
#include "fuzzybeta/inference.hpp"
#include "fuzzybeta/special_functions.hpp"

namespace fuzzybeta {

void FuzzyDataset::validate() const {
  if (spreads.size() != modes.size()) throw DomainError("fuzzy dataset: modes/spreads length mismatch");
  if (design.n() != modes.size()) throw DomainError("fuzzy dataset: design rows do not match data");
  design.validate();
  for (Eigen::Index i = 0; i < modes.size(); ++i) {
    if (!(modes[i] > 0.0 && modes[i] < 1.0)) {
      throw RowDomainError(static_cast<std::size_t>(i), "mode must lie in (0,1)");
    }
    if (!(spreads[i] >= 0.0) || !std::isfinite(spreads[i])) {
      throw RowDomainError(static_cast<std::size_t>(i), "spread must be finite and >= 0");
    }
  }
}

void EmConfig::validate() const {
  if (max_em_iterations <= 0) throw DomainError("EmConfig: max_em_iterations must be positive");
  if (!(q_tolerance > 0.0) || !(param_tolerance > 0.0) || !(dip_tolerance >= 0.0)) {
    throw DomainError("EmConfig: tolerances must be positive");
  }
  solver.validate();
}

std::pair<double, double> conditional_beta_params(double mu, double phi, double mode,
                                                  double spread, EtaNuConvention convention) {
  if (!(mu > 0.0 && mu < 1.0) || !(phi > 0.0)) throw DomainError("conditional params: bad (mu, phi)");
  if (!(mode > 0.0 && mode < 1.0) || !(spread >= 0.0)) {
    throw DomainError("conditional params: bad fuzzy observation");
  }
  const double extra = convention == EtaNuConvention::shifted ? 1.0 : 0.0;
  return {mu * phi + spread * mode + extra, phi * (1.0 - mu) + spread * (1.0 - mode) + extra};
}

double expected_log_y(double eta, double nu, EStepVariant variant) {
  if (!(eta > 0.0) || !(nu > 0.0)) throw DomainError("expected_log_y: eta, nu must be positive");
  if (variant == EStepVariant::exact_digamma) return digamma(eta) - digamma(eta + nu);
  return std::log(eta / (eta + nu)) - nu / (2.0 * eta * (1.0 + eta + nu));
}

double expected_log_1my(double eta, double nu, EStepVariant variant) {
  return expected_log_y(nu, eta, variant);
}

FilteredData e_step(const Coefficients& coef, const FuzzyDataset& data, const EmConfig& cfg) {
  const LinkedParams lp = apply_links(data.design, coef);
  const Eigen::Index n = data.n();
  FilteredData out{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      const auto [eta, nu] = conditional_beta_params(lp.mu[i], lp.phi[i], data.modes[i],
                                                     data.spreads[i], cfg.eta_nu_convention);
      out.y1_star[i] = expected_log_y(eta, nu, cfg.estep_variant);
      out.y2_star[i] = expected_log_1my(eta, nu, cfg.estep_variant);
    } catch (const DomainError& e) {
      throw RowDomainError(static_cast<std::size_t>(i), e.what());
    }
  }
  return out;
}

double q_function(const Coefficients& coef, const FilteredData& filtered, const DesignPair& design) {
  return complete_data_loglik(coef, filtered.y1_star, filtered.y2_star, design);
}

Eigen::VectorXd q_score(const Coefficients& coef, const FilteredData& filtered,
                        const DesignPair& design) {
  return complete_data_score(coef, filtered.y1_star, filtered.y2_star, design);
}

Coefficients m_step(const FilteredData& filtered, const DesignPair& design,
                    const Coefficients& coef_init, const EmConfig& cfg) {
  return solve_complete_data_score(filtered.y1_star, filtered.y2_star, design, coef_init,
                                   cfg.solver);
}

double fuzzy_log_likelihood_row(double mu, double phi, double mode, double spread) {
  if (spread == 0.0) return 0.0;
  const double a = mu * phi;
  const double b = (1.0 - mu) * phi;
  const double sm = spread * mode;
  const double sc = spread * (1.0 - mode);
  const double p = a + sm;
  const double q = b + sc;
  if (p < 10.0 || q < 10.0) {
    return log_beta(p, q) - log_beta(a, b) - log_normalization_constant(mode, spread);
  }
  // Stirling form of log B(p, q) with the log C terms folded into log1p.
  constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
  const double r = p + q;
  const double log_p_share = std::log(p / r);
  const double log_q_share = std::log(q / r);
  const double shift = a * (1.0 - mode) - b * mode;  // p - r m == -(q - r (1 - m))
  const double kernel = sm * std::log1p(shift / (r * mode)) +
                        sc * std::log1p(-shift / (r * (1.0 - mode)));
  return half_log_two_pi - 0.5 * std::log(r) + kernel + (a - 0.5) * log_p_share +
         (b - 0.5) * log_q_share + stirling_correction(p) + stirling_correction(q) -
         stirling_correction(r) - log_beta(a, b);
}

Eigen::VectorXd fuzzy_log_likelihood_rows(const Coefficients& coef, const FuzzyDataset& data) {
  const LinkedParams lp = apply_links(data.design, coef);
  Eigen::VectorXd rows(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    try {
      BetaFuzzyNumber(data.modes[i], data.spreads[i]);
      rows[i] = fuzzy_log_likelihood_row(lp.mu[i], lp.phi[i], data.modes[i], data.spreads[i]);
    } catch (const DomainError& e) {
      throw RowDomainError(static_cast<std::size_t>(i), e.what());
    }
  }
  return rows;
}

double fuzzy_log_likelihood(const Coefficients& coef, const FuzzyDataset& data) {
  return fuzzy_log_likelihood_rows(coef, data).sum();
}

Coefficients em_start(const FuzzyDataset& data, const SolverConfig& solver) {
  Eigen::VectorXd centroids(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    centroids[i] = defuzzify_centroid(BetaFuzzyNumber(data.modes[i], data.spreads[i]));
  }
  try {
    MlConfig ml;
    ml.solver = solver;
    return fit_crisp_ml(centroids, data.design, ml).coefficients;
  } catch (const SolverError&) {
    return moment_start(centroids, data.design);
  }
}

EmDiagnostics trace_diagnostics(const FitResult& fit, double noise_floor) {
  EmDiagnostics d;
  double previous = fit.initial_loglik;
  for (const TraceEntry& entry : fit.trace) {
    const double drop = previous - entry.loglik;
    previous = entry.loglik;
    if (drop > noise_floor) {
      ++d.dips;
      d.largest_dip = std::max(d.largest_dip, drop);
    }
  }
  return d;
}

namespace {

FitResult run_em(const FuzzyDataset& data, const EmConfig& cfg) {
  FitResult fit;
  fit.estimator = "fEM";
  fit.n_obs = data.n();
  fit.mean_names = data.design.mean_names;
  fit.precision_names = data.design.precision_names;

  Coefficients coef = em_start(data, cfg.solver);
  double loglik = fuzzy_log_likelihood(coef, data);
  fit.initial_loglik = loglik;

  int tolerated_dips = 0;
  int large_dips = 0;
  double largest_dip = 0.0;
  for (int iter = 1; iter <= cfg.max_em_iterations; ++iter) {
    const FilteredData filtered = e_step(coef, data, cfg);
    Coefficients next;
    try {
      next = m_step(filtered, data.design, coef, cfg);
    } catch (const SolverError& e) {
      throw SolverError("EM iteration " + std::to_string(iter) + ": M-step failed: " + e.what(),
                        e.trace());
    }
    const double next_loglik = fuzzy_log_likelihood(next, data);
    const double change = (next.stacked() - coef.stacked()).cwiseAbs().maxCoeff();
    fit.trace.push_back({next_loglik, change});

    const double drop = loglik - next_loglik;
    if (drop > cfg.dip_tolerance) {
      if (cfg.abort_on_large_dip) {
        throw SolverError("EM iteration " + std::to_string(iter) +
                              ": fuzzy log-likelihood decreased by " + std::to_string(drop),
                          {});
      }
      ++large_dips;
      largest_dip = std::max(largest_dip, drop);
    } else if (drop > 0.0) {
      ++tolerated_dips;
    }

    const double relative = std::abs(next_loglik - loglik) / std::max(1.0, std::abs(loglik));
    coef = next;
    loglik = next_loglik;
    if (relative <= cfg.q_tolerance && change <= cfg.param_tolerance) {
      fit.converged = true;
      break;
    }
  }
  if (large_dips > 0) {
    fit.warnings.push_back(std::to_string(large_dips) +
                           " EM iteration(s) decreased the fuzzy log-likelihood by more than " +
                           std::to_string(cfg.dip_tolerance) + " (largest " +
                           std::to_string(largest_dip) + ")");
  }
  if (tolerated_dips > 0) {
    fit.warnings.push_back(std::to_string(tolerated_dips) +
                           " log-likelihood decrease(s) within the dip tolerance");
  }
  if (!fit.converged) fit.warnings.push_back("EM did not converge within max_em_iterations");
  fit.coefficients = coef;
  fit.loglik = loglik;
  return fit;
}

}  // namespace

FitResult fit_fuzzy_em(const FuzzyDataset& data, const EmConfig& cfg) {
  cfg.validate();
  data.validate();
  data.design.check_rank();

  FitResult fit = run_em(data, cfg);
  fit.aic = aic(fit.loglik, fit.n_params());

  const FilteredData filtered = e_step(fit.coefficients, data, cfg);
  const InformationMatrix info = empirical_information(fit.coefficients, filtered, data.design);
  fit.std_errors = standard_errors(info, &fit.warnings);
  fit.residuals = residuals(fit.coefficients, data);

  if (cfg.compute_pseudo_r2) {
    if (data.design.J() == 1 && data.design.H() == 1) {
      fit.null_loglik = fit.loglik;
    } else {
      FuzzyDataset null_data{data.modes, data.spreads, DesignPair::intercept_only(data.n())};
      fit.null_loglik = run_em(null_data, cfg).loglik;
    }
    fit.pseudo_r2 = pseudo_r2(fit.loglik, *fit.null_loglik, data.n(), &fit.warnings);
  }
  return fit;
}

}  // namespace fuzzybeta
