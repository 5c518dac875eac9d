#include "fuzzybeta/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "fuzzybeta/error.hpp"
#include "fuzzybeta/fuzzy_number.hpp"

namespace fuzzybeta {

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::fem: return "fEM";
    case Estimator::dml_mean: return "dML-mean";
    case Estimator::dml_mode: return "dML-mode";
  }
  return "?";
}

Estimator parse_estimator(const std::string& name) {
  if (name == "fEM" || name == "fem") return Estimator::fem;
  if (name == "dML-mean" || name == "dml-mean") return Estimator::dml_mean;
  if (name == "dML-mode" || name == "dml-mode") return Estimator::dml_mode;
  throw UsageError("unknown estimator '" + name + "' (expected fEM, dML-mean, dML-mode)");
}

SimConfig SimConfig::standard_cell(int n, int J, int H, int B, std::uint64_t seed) {
  SimConfig cfg;
  cfg.n = n;
  cfg.J = J;
  cfg.H = H;
  cfg.B = B;
  cfg.seed = seed;
  if (J == 2) {
    cfg.true_beta = (Eigen::VectorXd(2) << -0.5, -0.81).finished();
  } else if (J == 4) {
    cfg.true_beta = (Eigen::VectorXd(4) << -0.5, -0.81, 0.7, 1.15).finished();
  } else {
    throw DomainError("standard_cell: J must be 2 or 4");
  }
  if (H == 1) {
    cfg.true_gamma = (Eigen::VectorXd(1) << 4.8).finished();
  } else if (H == 3) {
    cfg.true_gamma = (Eigen::VectorXd(3) << 4.8, -1.5, 1.03).finished();
  } else {
    throw DomainError("standard_cell: H must be 1 or 3");
  }
  return cfg;
}

void SimConfig::validate() const {
  if (n < 2) throw DomainError("SimConfig: n must be at least 2");
  if (J < 1 || H < 1) throw DomainError("SimConfig: J and H must be positive");
  if (B < 1) throw DomainError("SimConfig: B must be at least 1");
  if (true_beta.size() != J || true_gamma.size() != H) {
    throw DomainError("SimConfig: true coefficient lengths must match J and H");
  }
  if (!(gamma_shape > 0.0) || !(gamma_rate > 0.0)) {
    throw DomainError("SimConfig: spread distribution parameters must be positive");
  }
  if (estimators.empty()) throw DomainError("SimConfig: no estimators configured");
  em.validate();
}

DesignPair generate_design(int n, int J, int H, Rng& rng) {
  if (n < 1 || J < 1 || H < 1) throw DomainError("generate_design: bad dimensions");
  DesignPair d;
  d.X.resize(n, J);
  d.Z.resize(n, H);
  d.X.col(0).setOnes();
  d.Z.col(0).setOnes();
  for (int j = 1; j < J; ++j)
    for (int i = 0; i < n; ++i) d.X(i, j) = rng.uniform(1.0, 5.0);
  for (int h = 1; h < H; ++h)
    for (int i = 0; i < n; ++i) d.Z(i, h) = rng.uniform(1.0, 5.0);
  d.mean_names.push_back("(Intercept)");
  for (int j = 1; j < J; ++j) d.mean_names.push_back("x" + std::to_string(j));
  d.precision_names.push_back("(Intercept)");
  for (int h = 1; h < H; ++h) d.precision_names.push_back("z" + std::to_string(h));
  return d;
}

Eigen::VectorXd generate_crisp_outcomes(const Eigen::VectorXd& mu, const Eigen::VectorXd& phi,
                                        Rng& rng) {
  if (mu.size() != phi.size()) throw DomainError("generate_crisp_outcomes: length mismatch");
  Eigen::VectorXd y(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    double v;
    do {
      v = rng.beta(mu[i] * phi[i], phi[i] - mu[i] * phi[i]);
    } while (!(v > 0.0 && v < 1.0));
    y[i] = v;
  }
  return y;
}

FuzzifiedOutcomes fuzzify(const Eigen::VectorXd& y, Rng& rng, double gamma_shape,
                          double gamma_rate, SpreadConvention convention) {
  const double scale = convention == SpreadConvention::shape_rate ? 1.0 / gamma_rate : gamma_rate;
  FuzzifiedOutcomes out{Eigen::VectorXd(y.size()), Eigen::VectorXd(y.size()), 0};
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0 && y[i] < 1.0)) throw DomainError("fuzzify: y must lie in (0,1)");
    for (;;) {
      const double s = scale * rng.gamma(gamma_shape);
      if (s > 1e-8 && std::isfinite(s)) {
        const double m = rng.beta(y[i] * s, s - s * y[i]);
        if (m > 0.0 && m < 1.0) {
          out.modes[i] = m;
          out.spreads[i] = s;
          break;
        }
      }
      ++out.resamples;
    }
  }
  return out;
}

double BlockSummary::ratio() const {
  if (negative == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(positive) / static_cast<double>(negative);
}

double BlockSummary::percent_positive() const {
  const long total = positive + negative;
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(positive) / static_cast<double>(total);
}

const EstimatorSummary& SimulationReport::summary(Estimator e) const {
  const std::string name = estimator_name(e);
  for (const auto& s : estimators)
    if (s.estimator == name) return s;
  throw UsageError("estimator " + name + " not in report");
}

namespace {

EstimatorRun fit_one(Estimator e, const FuzzyDataset& data, const EmConfig& em) {
  EstimatorRun run;
  try {
    FitResult fit;
    if (e == Estimator::fem) {
      EmConfig cfg = em;
      cfg.compute_pseudo_r2 = false;
      fit = fit_fuzzy_em(data, cfg);
      const EmDiagnostics diag = trace_diagnostics(fit, 0.0);
      run.dips = diag.dips;
      run.largest_dip = diag.largest_dip;
    } else {
      Eigen::VectorXd y(data.n());
      for (Eigen::Index i = 0; i < data.n(); ++i) {
        const BetaFuzzyNumber fn(data.modes[i], data.spreads[i]);
        y[i] = e == Estimator::dml_mean ? defuzzify_centroid(fn) : defuzzify_first_maximum(fn);
      }
      MlConfig ml;
      ml.solver = em.solver;
      fit = fit_crisp_ml(y, data.design, ml);
    }
    run.ok = true;
    run.estimate = fit.coefficients.stacked();
    run.std_errors = fit.std_errors;
    run.converged = fit.converged;
    run.iterations = static_cast<int>(fit.trace.size());
    run.loglik = fit.loglik;
  } catch (const std::exception& ex) {
    run.ok = false;
    run.failure = ex.what();
  }
  return run;
}

// Stream ids: replication r uses r; the shared design uses the top id.
constexpr std::uint64_t kDesignStream = ~std::uint64_t{0};

}  // namespace

ReplicationRecord run_replication(const SimConfig& cfg, int index,
                                  const DesignPair* shared_design) {
  Rng rng(cfg.seed, static_cast<std::uint64_t>(index));
  ReplicationRecord rec;
  rec.index = index;
  DesignPair design = shared_design ? *shared_design : generate_design(cfg.n, cfg.J, cfg.H, rng);
  const LinkedParams lp = apply_links(design, Coefficients{cfg.true_beta, cfg.true_gamma});
  const Eigen::VectorXd y = generate_crisp_outcomes(lp.mu, lp.phi, rng);
  FuzzifiedOutcomes fz = fuzzify(y, rng, cfg.gamma_shape, cfg.gamma_rate, cfg.spread_convention);
  rec.resamples = fz.resamples;
  const FuzzyDataset data{std::move(fz.modes), std::move(fz.spreads), std::move(design)};
  for (Estimator e : cfg.estimators) rec.runs.push_back(fit_one(e, data, cfg.em));
  return rec;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FUZZYBETA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

void accumulate_block(BlockSummary& block, const std::vector<Eigen::VectorXd>& errors) {
  if (errors.empty()) return;
  const Eigen::Index k = errors.front().size();
  block.coefficient_bias = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(k);
  for (const auto& err : errors) {
    block.coefficient_bias += err;
    sq += err.cwiseProduct(err);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (err[j] > 0.0) {
        ++block.positive;
      } else if (err[j] < 0.0) {
        ++block.negative;
      } else {
        ++block.positive;
        ++block.zero;
      }
    }
  }
  const auto count = static_cast<double>(errors.size());
  block.coefficient_bias /= count;
  block.coefficient_rmse = (sq / count).cwiseSqrt();
  block.bias = block.coefficient_bias.mean();
  block.rmse = block.coefficient_rmse.mean();
  block.pooled_rmse = std::sqrt(sq.sum() / (count * static_cast<double>(k)));
}

}  // namespace

SimulationReport summarize(const SimConfig& cfg, const std::vector<ReplicationRecord>& records) {
  SimulationReport rep;
  rep.n = cfg.n;
  rep.J = cfg.J;
  rep.H = cfg.H;
  rep.B = cfg.B;
  rep.seed = cfg.seed;
  rep.true_beta = cfg.true_beta;
  rep.true_gamma = cfg.true_gamma;
  for (const auto& r : records) rep.resamples += r.resamples;

  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    EstimatorSummary s;
    s.estimator = estimator_name(cfg.estimators[e]);
    std::vector<Eigen::VectorXd> beta_err, gamma_err;
    for (const auto& r : records) {
      const EstimatorRun& run = r.runs.at(e);
      ++s.attempted;
      if (!run.ok) {
        ++s.failures;
        continue;
      }
      if (!run.converged) ++s.non_converged;
      s.total_dips += run.dips;
      s.largest_dip = std::max(s.largest_dip, run.largest_dip);
      beta_err.push_back(run.estimate.head(cfg.J) - cfg.true_beta);
      gamma_err.push_back(run.estimate.tail(cfg.H) - cfg.true_gamma);
    }
    accumulate_block(s.beta, beta_err);
    accumulate_block(s.gamma, gamma_err);
    rep.estimators.push_back(std::move(s));
  }
  if (cfg.keep_replications) rep.replications = records;
  return rep;
}

SimulationReport run_monte_carlo(const SimConfig& cfg) {
  cfg.validate();
  std::optional<DesignPair> shared;
  if (cfg.fixed_design) {
    Rng design_rng(cfg.seed, kDesignStream);
    shared = generate_design(cfg.n, cfg.J, cfg.H, design_rng);
  }
  const DesignPair* shared_ptr = shared ? &*shared : nullptr;

  std::vector<ReplicationRecord> records(static_cast<std::size_t>(cfg.B));
  const int threads = std::min(resolve_thread_count(cfg.threads), cfg.B);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.B));
  auto worker = [&]() {
    for (int r = next.fetch_add(1); r < cfg.B; r = next.fetch_add(1)) {
      try {
        records[static_cast<std::size_t>(r)] = run_replication(cfg, r, shared_ptr);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return summarize(cfg, records);
}

}  // namespace fuzzybeta
