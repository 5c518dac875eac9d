#include "fuzzybeta/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "fuzzybeta/error.hpp"

namespace fuzzybeta {

using nlohmann::json;

std::string fmt6(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json fit_to_json(const FitResult& fit) {
  json j;
  j["estimator"] = fit.estimator;
  j["n_obs"] = fit.n_obs;
  j["converged"] = fit.converged;
  j["iterations"] = fit.trace.size();
  const Eigen::Index J = fit.coefficients.beta.size();
  json coefs = json::array();
  for (Eigen::Index k = 0; k < fit.n_params(); ++k) {
    const bool mean_part = k < J;
    const auto idx = static_cast<std::size_t>(mean_part ? k : k - J);
    const auto& names = mean_part ? fit.mean_names : fit.precision_names;
    json c;
    c["part"] = mean_part ? "mean" : "precision";
    c["name"] = idx < names.size() ? names[idx] : ("c" + std::to_string(k));
    c["estimate"] = mean_part ? fit.coefficients.beta[k] : fit.coefficients.gamma[k - J];
    c["std_error"] = k < fit.std_errors.size() ? finite_or_null(fit.std_errors[k]) : json(nullptr);
    coefs.push_back(c);
  }
  j["coefficients"] = coefs;
  j["mean_names"] = fit.mean_names;
  j["precision_names"] = fit.precision_names;
  j["loglik"] = fit.loglik;
  j["aic"] = fit.aic;
  j["pseudo_r2"] = fit.pseudo_r2 ? json(*fit.pseudo_r2) : json(nullptr);
  j["null_loglik"] = fit.null_loglik ? json(*fit.null_loglik) : json(nullptr);
  if (fit.residuals.size() > 0) {
    const Quartiles q = residual_quantiles(fit.residuals);
    j["residual_quartiles"] = {{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}};
  }
  json trace = json::array();
  for (const auto& t : fit.trace) trace.push_back({t.loglik, t.max_param_change});
  j["initial_loglik"] = fit.initial_loglik;
  j["trace"] = trace;
  j["warnings"] = fit.warnings;
  return j;
}

FitResult fit_from_json(const json& j) {
  try {
    FitResult fit;
    fit.estimator = j.at("estimator").get<std::string>();
    fit.n_obs = j.at("n_obs").get<Eigen::Index>();
    fit.converged = j.at("converged").get<bool>();
    fit.mean_names = j.at("mean_names").get<std::vector<std::string>>();
    fit.precision_names = j.at("precision_names").get<std::vector<std::string>>();
    std::vector<double> beta, gamma, se;
    for (const auto& c : j.at("coefficients")) {
      (c.at("part") == "mean" ? beta : gamma).push_back(c.at("estimate").get<double>());
      se.push_back(c.at("std_error").is_null() ? NAN : c.at("std_error").get<double>());
    }
    fit.coefficients.beta = Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
    fit.coefficients.gamma = Eigen::Map<Eigen::VectorXd>(gamma.data(), static_cast<Eigen::Index>(gamma.size()));
    fit.std_errors = Eigen::Map<Eigen::VectorXd>(se.data(), static_cast<Eigen::Index>(se.size()));
    fit.loglik = j.at("loglik").get<double>();
    fit.aic = j.at("aic").get<double>();
    if (!j.at("pseudo_r2").is_null()) fit.pseudo_r2 = j.at("pseudo_r2").get<double>();
    if (!j.at("null_loglik").is_null()) fit.null_loglik = j.at("null_loglik").get<double>();
    return fit;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("malformed fit report: ") + e.what());
  }
}

std::string fit_to_text(const FitResult& fit) {
  std::ostringstream os;
  os << "Estimator: " << fit.estimator << "   n = " << fit.n_obs
     << "   converged: " << (fit.converged ? "yes" : "no") << " after " << fit.trace.size()
     << " iteration(s)\n\n";
  os << std::left << std::setw(12) << "part" << std::setw(24) << "term" << std::right
     << std::setw(14) << "estimate" << std::setw(14) << "std.error" << "\n";
  const Eigen::Index J = fit.coefficients.beta.size();
  for (Eigen::Index k = 0; k < fit.n_params(); ++k) {
    const bool mean_part = k < J;
    const auto idx = static_cast<std::size_t>(mean_part ? k : k - J);
    const auto& names = mean_part ? fit.mean_names : fit.precision_names;
    const double est = mean_part ? fit.coefficients.beta[k] : fit.coefficients.gamma[k - J];
    const double se = k < fit.std_errors.size() ? fit.std_errors[k] : NAN;
    os << std::left << std::setw(12) << (mean_part ? "mu" : "phi") << std::setw(24)
       << (idx < names.size() ? names[idx] : "?") << std::right << std::setw(14) << fmt6(est)
       << std::setw(14) << fmt6(se) << "\n";
  }
  os << "\nlog-likelihood: " << fmt6(fit.loglik) << "\nAIC: " << fmt6(fit.aic) << "\n";
  if (fit.pseudo_r2) os << "pseudo-R2: " << fmt6(*fit.pseudo_r2) << "\n";
  if (fit.residuals.size() > 0) {
    const Quartiles q = residual_quantiles(fit.residuals);
    os << "residuals: Q1 " << fmt6(q.q1) << "  median " << fmt6(q.median) << "  Q3 "
       << fmt6(q.q3) << "\n";
  }
  if (!fit.trace.empty()) {
    os << "trace: start " << fmt6(fit.initial_loglik) << " -> final "
       << fmt6(fit.trace.back().loglik) << ", last max change "
       << fmt6(fit.trace.back().max_param_change) << "\n";
  }
  for (const auto& w : fit.warnings) os << "warning: " << w << "\n";
  return os.str();
}

json lrt_to_json(const LrtResult& lrt) {
  return {{"statistic", lrt.statistic}, {"df", lrt.df}, {"p_value", lrt.p_value}};
}

namespace {

json block_json(const BlockSummary& b) {
  return {{"bias", b.bias},
          {"rmse", b.rmse},
          {"pooled_rmse", b.pooled_rmse},
          {"positive", b.positive},
          {"negative", b.negative},
          {"zero", b.zero},
          {"r", finite_or_null(b.ratio())},
          {"p", b.percent_positive()},
          {"coefficient_bias", vec(b.coefficient_bias)},
          {"coefficient_rmse", vec(b.coefficient_rmse)}};
}

}  // namespace

json simulation_to_json(const SimulationReport& rep) {
  json j;
  j["n"] = rep.n;
  j["J"] = rep.J;
  j["H"] = rep.H;
  j["B"] = rep.B;
  j["seed"] = rep.seed;
  j["true_beta"] = vec(rep.true_beta);
  j["true_gamma"] = vec(rep.true_gamma);
  j["resamples"] = rep.resamples;
  json ests = json::array();
  for (const auto& s : rep.estimators) {
    ests.push_back({{"estimator", s.estimator},
                    {"attempted", s.attempted},
                    {"failures", s.failures},
                    {"non_converged", s.non_converged},
                    {"loglik_decreases", s.total_dips},
                    {"largest_decrease", s.largest_dip},
                    {"beta", block_json(s.beta)},
                    {"gamma", block_json(s.gamma)}});
  }
  j["estimators"] = ests;
  if (!rep.replications.empty()) {
    json reps = json::array();
    for (const auto& r : rep.replications) {
      json runs = json::array();
      for (const auto& run : r.runs) {
        runs.push_back({{"ok", run.ok},
                        {"failure", run.failure},
                        {"estimate", vec(run.estimate)},
                        {"std_errors", vec(run.std_errors)},
                        {"converged", run.converged},
                        {"iterations", run.iterations},
                        {"loglik", run.loglik},
                        {"loglik_decreases", run.dips},
                        {"largest_decrease", run.largest_dip}});
      }
      reps.push_back({{"index", r.index}, {"resamples", r.resamples}, {"runs", runs}});
    }
    j["replications"] = reps;
  }
  return j;
}

std::string simulation_to_text(const SimulationReport& rep) {
  std::ostringstream os;
  os << "cell n=" << rep.n << " J=" << rep.J << " H=" << rep.H << " B=" << rep.B
     << " seed=" << rep.seed << "\n";
  os << std::left << std::setw(10) << "estimator" << std::setw(7) << "block" << std::right
     << std::setw(12) << "bias" << std::setw(12) << "rmse" << std::setw(12) << "overall"
     << std::setw(10) << "r" << std::setw(10) << "p(%)" << std::setw(10) << "failed" << "\n";
  for (const auto& s : rep.estimators) {
    for (int b = 0; b < 2; ++b) {
      const BlockSummary& blk = b == 0 ? s.beta : s.gamma;
      os << std::left << std::setw(10) << s.estimator << std::setw(7) << (b == 0 ? "beta" : "gamma")
         << std::right << std::setw(12) << fmt6(blk.bias) << std::setw(12) << fmt6(blk.rmse)
         << std::setw(12) << fmt6(blk.pooled_rmse) << std::setw(10) << fmt6(blk.ratio())
         << std::setw(10) << fmt6(blk.percent_positive()) << std::setw(10) << s.failures << "\n";
    }
  }
  if (rep.resamples > 0) os << "degenerate fuzzy draws resampled: " << rep.resamples << "\n";
  return os.str();
}

std::string simulation_to_csv(const SimulationReport& rep) {
  std::ostringstream os;
  os << "n,J,H,B,estimator,block,bias,rmse,overall_rmse,positive,negative,r,p,failures\n";
  for (const auto& s : rep.estimators) {
    for (int b = 0; b < 2; ++b) {
      const BlockSummary& blk = b == 0 ? s.beta : s.gamma;
      json row = json::array({blk.bias, blk.rmse, blk.pooled_rmse});
      os << rep.n << ',' << rep.J << ',' << rep.H << ',' << rep.B << ',' << s.estimator << ','
         << (b == 0 ? "beta" : "gamma") << ',' << row[0].dump() << ',' << row[1].dump() << ','
         << row[2].dump() << ',' << blk.positive << ',' << blk.negative << ','
         << (std::isfinite(blk.ratio()) ? json(blk.ratio()).dump() : std::string("Inf")) << ',' << json(blk.percent_positive()).dump()
         << ',' << s.failures << "\n";
    }
  }
  return os.str();
}

}  // namespace fuzzybeta
