// fuzzybeta: fit beta regression models to fuzzy ratings from the command line.
//
//   fuzzybeta fit data.csv --mode-col m --spread-col s --mu-covariates x1,x2
//   fuzzybeta compare full.json null.json
//   fuzzybeta defuzzify data.csv --method centroid
//   fuzzybeta convert trapezoids.csv
//   fuzzybeta simulate --n 500 --j 2 --h 1 --b 200 --seed 7 --out cell
//   fuzzybeta replay run.manifest.json
//
// Exit codes: 0 success, 2 usage, 3 input/parse, 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzybeta/dataset.hpp"
#include "fuzzybeta/error.hpp"
#include "fuzzybeta/fuzzy_em.hpp"
#include "fuzzybeta/fuzzy_number.hpp"
#include "fuzzybeta/inference.hpp"
#include "fuzzybeta/report.hpp"
#include "fuzzybeta/simulation.hpp"

namespace fb = fuzzybeta;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumerical = 4;

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fb::UsageError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw fb::UsageError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fb::ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw fb::ParseError(0, path + ": " + e.what());
  }
}

char delimiter_char(const std::string& d) {
  if (d == "\\t" || d == "tab") return '\t';
  if (d.size() != 1) throw fb::UsageError("delimiter must be a single character");
  return d[0];
}

json manifest(const std::string& command, const std::vector<std::string>& argv,
              const json& config, const std::vector<std::string>& inputs) {
  json m;
  m["tool"] = "fuzzybeta";
  m["version"] = kVersion;
  m["command"] = command;
  m["argv"] = argv;
  m["config"] = config;
  json digests = json::array();
  for (const auto& p : inputs) digests.push_back({{"path", p}, {"fnv1a64", fb::file_digest(p)}});
  m["inputs"] = digests;
  return m;
}

fb::EStepVariant parse_estep(const std::string& s) {
  if (s == "taylor") return fb::EStepVariant::taylor;
  if (s == "exact") return fb::EStepVariant::exact_digamma;
  throw fb::UsageError("--estep must be taylor or exact");
}

fb::EtaNuConvention parse_convention(const std::string& s) {
  if (s == "shifted") return fb::EtaNuConvention::shifted;
  if (s == "consistent") return fb::EtaNuConvention::consistent;
  throw fb::UsageError("--convention must be shifted or consistent");
}

struct EmFlags {
  int max_iter = 500;
  double q_tol = 1e-8;
  double param_tol = 1e-6;
  std::string estep = "taylor";
  std::string convention = "consistent";
  bool abort_on_dip = false;

  void add(CLI::App* app) {
    app->add_option("--max-iter", max_iter, "EM iteration cap")->capture_default_str();
    app->add_option("--q-tol", q_tol, "relative log-likelihood tolerance")->capture_default_str();
    app->add_option("--param-tol", param_tol, "max coefficient change tolerance")
        ->capture_default_str();
    app->add_option("--estep", estep, "E-step: taylor | exact")->capture_default_str();
    app->add_option("--convention", convention, "conditional beta parameters: shifted | consistent")
        ->capture_default_str();
    app->add_flag("--abort-on-dip", abort_on_dip,
                  "stop when the log-likelihood falls by more than 1e-6");
  }

  fb::EmConfig config() const {
    fb::EmConfig cfg;
    cfg.max_em_iterations = max_iter;
    cfg.q_tolerance = q_tol;
    cfg.param_tolerance = param_tol;
    cfg.estep_variant = parse_estep(estep);
    cfg.eta_nu_convention = parse_convention(convention);
    cfg.abort_on_large_dip = abort_on_dip;
    try {
      cfg.validate();
    } catch (const fb::DomainError& e) {
      throw fb::UsageError(e.what());
    }
    return cfg;
  }

  json to_json() const {
    return {{"max_iter", max_iter}, {"q_tol", q_tol},           {"param_tol", param_tol},
            {"estep", estep},       {"convention", convention}, {"abort_on_dip", abort_on_dip}};
  }
};

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

int run(std::vector<std::string> args);

// ---------------------------------------------------------------------------

struct FitCmd {
  std::string data;
  std::string mode_col = "m";
  std::string spread_col = "s";
  std::vector<std::string> mu_cov;
  std::vector<std::string> phi_cov;
  std::string delimiter = ",";
  std::string estimator = "fEM";
  std::string boundary = "clamp";
  std::string json_out;
  std::string manifest_out;
  bool quiet = false;
  EmFlags em;

  int exec(const std::vector<std::string>& argv) const {
    fb::ModelSpec spec;
    spec.mode_col = mode_col;
    spec.spread_col = spread_col;
    spec.mu_covariates = split_list(mu_cov);
    spec.phi_covariates = split_list(phi_cov);
    if (boundary == "clamp") {
      spec.boundary = fb::BoundaryPolicy::clamp;
    } else if (boundary == "reject") {
      spec.boundary = fb::BoundaryPolicy::reject;
    } else {
      throw fb::UsageError("--boundary must be clamp or reject");
    }
    const fb::Estimator est = fb::parse_estimator(estimator);
    const fb::EmConfig cfg = em.config();

    const fb::CsvTable table = fb::read_csv(data, delimiter_char(delimiter));
    const fb::LoadedDataset loaded = fb::load_fuzzy_dataset(table, spec);
    if (loaded.dropped_missing > 0) {
      std::cerr << "note: dropped " << loaded.dropped_missing << " incomplete row(s)\n";
    }
    if (loaded.clamped_modes > 0) {
      std::cerr << "note: clamped " << loaded.clamped_modes << " boundary mode(s)\n";
    }

    fb::FitResult fit;
    if (est == fb::Estimator::fem) {
      fit = fb::fit_fuzzy_em(loaded.data, cfg);
    } else {
      Eigen::VectorXd y(loaded.data.n());
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const fb::BetaFuzzyNumber fn(loaded.data.modes[i], loaded.data.spreads[i]);
        y[i] = est == fb::Estimator::dml_mean ? fb::defuzzify_centroid(fn)
                                              : fb::defuzzify_first_maximum(fn);
      }
      fb::MlConfig ml;
      ml.solver = cfg.solver;
      ml.compute_pseudo_r2 = true;
      fit = fb::fit_crisp_ml(y, loaded.data.design, ml);
      fit.estimator = fb::estimator_name(est);
    }

    if (quiet) {
      for (const auto& w : fit.warnings) std::cerr << "warning: " << w << "\n";
    } else {
      std::cout << fb::fit_to_text(fit);
    }
    json report = fb::fit_to_json(fit);
    report["input_digest"] = fb::file_digest(data);
    report["dropped_rows"] = loaded.dropped_missing;
    report["clamped_modes"] = loaded.clamped_modes;
    if (!json_out.empty()) write_file(json_out, report.dump(2) + "\n");
    if (!manifest_out.empty()) {
      json config = {{"mode_col", mode_col},
                     {"spread_col", spread_col},
                     {"mu_covariates", spec.mu_covariates},
                     {"phi_covariates", spec.phi_covariates},
                     {"delimiter", delimiter},
                     {"estimator", estimator},
                     {"boundary", boundary},
                     {"em", em.to_json()}};
      write_file(manifest_out, manifest("fit", argv, config, {data}).dump(2) + "\n");
    }
    return 0;
  }
};

struct CompareCmd {
  std::string full;
  std::string null;
  std::string json_out;
  std::string manifest_out;

  int exec(const std::vector<std::string>& argv) const {
    const json jf = parse_json_file(full);
    const json jn = parse_json_file(null);
    if (jf.contains("input_digest") && jn.contains("input_digest") &&
        jf["input_digest"] != jn["input_digest"]) {
      throw fb::UsageError("fit reports come from different data files (digest mismatch)");
    }
    const fb::FitResult ff = fb::fit_from_json(jf);
    const fb::FitResult fn = fb::fit_from_json(jn);
    json out;
    out["full_loglik"] = ff.loglik;
    out["null_loglik"] = fn.loglik;
    out["aic_full"] = ff.aic;
    out["aic_null"] = fn.aic;
    out["aic_delta"] = ff.aic - fn.aic;
    std::string verdict;
    if (ff.n_params() == fn.n_params() && ff.mean_names == fn.mean_names &&
        ff.precision_names == fn.precision_names) {
      out["lrt"] = {{"statistic", 0.0}, {"df", 0}, {"p_value", 1.0}};
      verdict = "identical models: no test";
      std::cout << "LRT: statistic 0, df 0, p = 1\n";
    } else {
      const fb::LrtResult lrt = fb::likelihood_ratio_test(ff, fn);
      out["lrt"] = fb::lrt_to_json(lrt);
      verdict = lrt.p_value < 0.05 ? "full model fits significantly better (p < 0.05)"
                                   : "no significant improvement (p >= 0.05)";
      std::cout << "LRT: chi2(" << lrt.df << ") = " << fb::fmt6(lrt.statistic)
                << ", p = " << fb::fmt6(lrt.p_value) << "\n";
    }
    out["verdict"] = verdict;
    std::cout << "AIC full " << fb::fmt6(ff.aic) << ", null " << fb::fmt6(fn.aic) << ", delta "
              << fb::fmt6(ff.aic - fn.aic) << "\n"
              << verdict << "\n";
    if (!json_out.empty()) write_file(json_out, out.dump(2) + "\n");
    if (!manifest_out.empty()) {
      write_file(manifest_out, manifest("compare", argv, json::object(), {full, null}).dump(2) + "\n");
    }
    return 0;
  }
};

struct DefuzzifyCmd {
  std::string data;
  std::string method = "centroid";
  std::string mode_col = "m";
  std::string spread_col = "s";
  std::string delimiter = ",";
  std::string output;
  std::string manifest_out;

  int exec(const std::vector<std::string>& argv) const {
    if (method != "centroid" && method != "first-max") {
      throw fb::UsageError("--method must be centroid or first-max");
    }
    const char delim = delimiter_char(delimiter);
    fb::CsvTable table = fb::read_csv(data, delim);
    const std::size_t mj = table.column_index(mode_col);
    // Without a spread column the response is already crisp.
    if (table.has_column(spread_col)) {
      const std::size_t sj = table.column_index(spread_col);
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        auto& row = table.rows[i];
        if (fb::is_missing(row[mj]) || fb::is_missing(row[sj])) {
          row[mj] = "NA";
          continue;
        }
        double m = fb::parse_number(row[mj], table.lines[i]);
        const double s = fb::parse_number(row[sj], table.lines[i]);
        fb::sanitize_mode(m, fb::BoundaryPolicy::clamp);
        try {
          const fb::BetaFuzzyNumber fn(m, s);
          row[mj] = fb::format_full(method == "centroid" ? fb::defuzzify_centroid(fn)
                                                         : fb::defuzzify_first_maximum(fn));
        } catch (const fb::DomainError& e) {
          throw fb::ParseError(table.lines[i], e.what());
        }
      }
      table.header.erase(table.header.begin() + static_cast<std::ptrdiff_t>(sj));
      for (auto& row : table.rows) row.erase(row.begin() + static_cast<std::ptrdiff_t>(sj));
    }
    std::ostringstream os;
    fb::write_csv(os, table, delim);
    if (output.empty()) {
      std::cout << os.str();
    } else {
      write_file(output, os.str());
    }
    if (!manifest_out.empty()) {
      json config = {{"method", method},
                     {"mode_col", mode_col},
                     {"spread_col", spread_col},
                     {"delimiter", delimiter}};
      write_file(manifest_out, manifest("defuzzify", argv, config, {data}).dump(2) + "\n");
    }
    return 0;
  }
};

struct ConvertCmd {
  std::string data;
  std::vector<std::string> cols{"a", "b", "c", "d"};
  std::string mode_name = "m";
  std::string spread_name = "s";
  std::string delimiter = ",";
  std::string output;
  std::string manifest_out;

  int exec(const std::vector<std::string>& argv) const {
    if (cols.size() != 4) throw fb::UsageError("--trapezoid-cols needs four column names");
    const char delim = delimiter_char(delimiter);
    fb::CsvTable table = fb::read_csv(data, delim);
    std::vector<std::size_t> idx;
    for (const auto& c : cols) idx.push_back(table.column_index(c));
    table.header.push_back(mode_name);
    table.header.push_back(spread_name);
    std::size_t degenerate = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      auto& row = table.rows[i];
      bool missing = false;
      for (auto j : idx) missing = missing || fb::is_missing(row[j]);
      if (missing) {
        row.push_back("NA");
        row.push_back("NA");
        continue;
      }
      fb::TrapezoidalFuzzyNumber tz{fb::parse_number(row[idx[0]], table.lines[i]),
                                    fb::parse_number(row[idx[1]], table.lines[i]),
                                    fb::parse_number(row[idx[2]], table.lines[i]),
                                    fb::parse_number(row[idx[3]], table.lines[i])};
      try {
        const fb::BetaFuzzyNumber fn = fb::trapezoid_to_beta(tz);
        row.push_back(fb::format_full(fn.mode()));
        row.push_back(fb::format_full(fn.precision()));
      } catch (const std::exception& e) {
        ++degenerate;
        std::cerr << "row " << i + 1 << " (line " << table.lines[i] << "): " << e.what() << "\n";
        row.push_back("NA");
        row.push_back("NA");
      }
    }
    if (degenerate > 0) std::cerr << degenerate << " row(s) could not be converted\n";
    std::ostringstream os;
    fb::write_csv(os, table, delim);
    if (output.empty()) {
      std::cout << os.str();
    } else {
      write_file(output, os.str());
    }
    if (!manifest_out.empty()) {
      json config = {{"trapezoid_cols", cols},
                     {"mode_name", mode_name},
                     {"spread_name", spread_name},
                     {"delimiter", delimiter}};
      write_file(manifest_out, manifest("convert", argv, config, {data}).dump(2) + "\n");
    }
    return 0;
  }
};

struct SimulateCmd {
  int n = 500;
  int J = 2;
  int H = 1;
  int B = 200;
  std::uint64_t seed = 20240501;
  std::vector<std::string> estimators{"fEM", "dML-mean", "dML-mode"};
  std::string spread_convention = "shape-rate";
  double gamma_shape = 1.025;
  double gamma_rate = 0.001;
  int threads = 0;
  bool fixed_design = false;
  bool keep_replications = false;
  std::string out_prefix;
  EmFlags em;

  int exec(const std::vector<std::string>& argv) const {
    fb::SimConfig cfg;
    try {
      cfg = fb::SimConfig::standard_cell(n, J, H, B, seed);
    } catch (const fb::DomainError& e) {
      throw fb::UsageError(e.what());
    }
    cfg.estimators.clear();
    for (const auto& e : split_list(estimators)) cfg.estimators.push_back(fb::parse_estimator(e));
    if (spread_convention == "shape-rate") {
      cfg.spread_convention = fb::SpreadConvention::shape_rate;
    } else if (spread_convention == "shape-scale") {
      cfg.spread_convention = fb::SpreadConvention::shape_scale;
    } else {
      throw fb::UsageError("--spread-convention must be shape-rate or shape-scale");
    }
    cfg.gamma_shape = gamma_shape;
    cfg.gamma_rate = gamma_rate;
    cfg.threads = threads;
    cfg.fixed_design = fixed_design;
    cfg.keep_replications = keep_replications;
    cfg.em = em.config();
    try {
      cfg.validate();
    } catch (const fb::DomainError& e) {
      throw fb::UsageError(e.what());
    }

    const fb::SimulationReport rep = fb::run_monte_carlo(cfg);
    const std::string text = fb::simulation_to_text(rep);
    std::cout << text;
    if (!out_prefix.empty()) {
      write_file(out_prefix + ".txt", text);
      write_file(out_prefix + ".csv", fb::simulation_to_csv(rep));
      write_file(out_prefix + ".json", fb::simulation_to_json(rep).dump(2) + "\n");
      json config = {{"n", n},
                     {"J", J},
                     {"H", H},
                     {"B", B},
                     {"seed", seed},
                     {"estimators", split_list(estimators)},
                     {"spread_convention", spread_convention},
                     {"gamma_shape", gamma_shape},
                     {"gamma_rate", gamma_rate},
                     {"fixed_design", fixed_design},
                     {"em", em.to_json()}};
      write_file(out_prefix + ".manifest.json",
                 manifest("simulate", argv, config, {}).dump(2) + "\n");
    }
    return 0;
  }
};

int replay(const std::string& path) {
  const json m = parse_json_file(path);
  if (!m.contains("argv") || !m["argv"].is_array()) {
    throw fb::ParseError(0, path + ": manifest has no argv");
  }
  if (m.contains("inputs")) {
    for (const auto& in : m["inputs"]) {
      const std::string p = in.at("path").get<std::string>();
      if (fb::file_digest(p) != in.at("fnv1a64").get<std::string>()) {
        throw fb::UsageError("input '" + p + "' changed since the manifest was written");
      }
    }
  }
  return run(m["argv"].get<std::vector<std::string>>());
}

int run(std::vector<std::string> args) {
  CLI::App app{"Beta regression for fuzzy ratings data (fuzzy EM)", "fuzzybeta"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  FitCmd fit;
  auto* c_fit = app.add_subcommand("fit", "fit a beta regression model to fuzzy responses");
  c_fit->add_option("data", fit.data, "CSV file")->required();
  c_fit->add_option("--mode-col", fit.mode_col, "mode column")->capture_default_str();
  c_fit->add_option("--spread-col", fit.spread_col, "precision column")->capture_default_str();
  c_fit->add_option("--mu-covariates", fit.mu_cov, "mean-model covariates (comma separated)");
  c_fit->add_option("--phi-covariates", fit.phi_cov,
                    "precision-model covariates (comma separated)");
  c_fit->add_option("--delimiter", fit.delimiter, "field delimiter")->capture_default_str();
  c_fit->add_option("--estimator", fit.estimator, "fEM | dML-mean | dML-mode")
      ->capture_default_str();
  c_fit->add_option("--boundary", fit.boundary, "modes at 0 or 1: clamp | reject")
      ->capture_default_str();
  c_fit->add_option("--json", fit.json_out, "write the machine-readable report here");
  c_fit->add_option("--manifest", fit.manifest_out, "write a run manifest here");
  c_fit->add_flag("--quiet", fit.quiet, "no table on stdout");
  fit.em.add(c_fit);

  CompareCmd cmp;
  auto* c_cmp = app.add_subcommand("compare", "likelihood-ratio test between two fit reports");
  c_cmp->add_option("full", cmp.full, "report of the larger model")->required();
  c_cmp->add_option("null", cmp.null, "report of the nested model")->required();
  c_cmp->add_option("--json", cmp.json_out, "write the comparison as JSON");
  c_cmp->add_option("--manifest", cmp.manifest_out, "write a run manifest here");

  DefuzzifyCmd dfz;
  auto* c_dfz = app.add_subcommand("defuzzify", "replace fuzzy responses by crisp values");
  c_dfz->add_option("data", dfz.data, "CSV file")->required();
  c_dfz->add_option("--method", dfz.method, "centroid | first-max")->capture_default_str();
  c_dfz->add_option("--mode-col", dfz.mode_col, "mode column")->capture_default_str();
  c_dfz->add_option("--spread-col", dfz.spread_col, "precision column")->capture_default_str();
  c_dfz->add_option("--delimiter", dfz.delimiter, "field delimiter")->capture_default_str();
  c_dfz->add_option("-o,--output", dfz.output, "output CSV (default stdout)");
  c_dfz->add_option("--manifest", dfz.manifest_out, "write a run manifest here");

  ConvertCmd cnv;
  auto* c_cnv = app.add_subcommand("convert", "convert trapezoidal ratings to beta fuzzy numbers");
  c_cnv->add_option("data", cnv.data, "CSV file")->required();
  c_cnv->add_option("--trapezoid-cols", cnv.cols, "columns a,b,c,d")
      ->delimiter(',')
      ->capture_default_str();
  c_cnv->add_option("--mode-name", cnv.mode_name, "name of the new mode column")
      ->capture_default_str();
  c_cnv->add_option("--spread-name", cnv.spread_name, "name of the new precision column")
      ->capture_default_str();
  c_cnv->add_option("--delimiter", cnv.delimiter, "field delimiter")->capture_default_str();
  c_cnv->add_option("-o,--output", cnv.output, "output CSV (default stdout)");
  c_cnv->add_option("--manifest", cnv.manifest_out, "write a run manifest here");

  SimulateCmd sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo recovery study for one design cell");
  c_sim->set_help_flag("--help", "print this help message and exit");
  c_sim->add_option("--n", sim.n, "sample size")->capture_default_str();
  c_sim->add_option("--j", sim.J, "mean-model columns (2 or 4)")->capture_default_str();
  c_sim->add_option("--h", sim.H, "precision-model columns (1 or 3)")->capture_default_str();
  c_sim->add_option("--b", sim.B, "replications")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
  c_sim->add_option("--estimators", sim.estimators, "subset of fEM,dML-mean,dML-mode")
      ->delimiter(',');
  c_sim->add_option("--spread-convention", sim.spread_convention, "shape-rate | shape-scale")
      ->capture_default_str();
  c_sim->add_option("--gamma-shape", sim.gamma_shape, "spread distribution shape")
      ->capture_default_str();
  c_sim->add_option("--gamma-rate", sim.gamma_rate, "spread distribution rate (or scale)")
      ->capture_default_str();
  c_sim->add_option("--threads", sim.threads,
                    "worker threads (default: FUZZYBETA_THREADS or all cores)");
  c_sim->add_flag("--fixed-design", sim.fixed_design, "share one design across replications");
  c_sim->add_flag("--keep-replications", sim.keep_replications,
                  "include per-replication estimates in the JSON report");
  c_sim->add_option("--out", sim.out_prefix, "write PREFIX.{txt,csv,json,manifest.json}");
  sim.em.add(c_sim);

  std::string manifest_path;
  auto* c_rep = app.add_subcommand("replay", "rerun a command from its manifest");
  c_rep->add_option("manifest", manifest_path, "manifest JSON")->required();

  const std::vector<std::string> original = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*c_fit) return fit.exec(original);
  if (*c_cmp) return cmp.exec(original);
  if (*c_dfz) return dfz.exec(original);
  if (*c_cnv) return cnv.exec(original);
  if (*c_sim) return sim.exec(original);
  if (*c_rep) return replay(manifest_path);
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const fb::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fb::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitParse;
  } catch (const fb::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    if (!e.trace().empty()) {
      std::cerr << "residual trace:";
      for (double r : e.trace()) std::cerr << ' ' << fb::fmt6(r);
      std::cerr << "\n";
    }
    return kExitNumerical;
  } catch (const fb::RankDeficientError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
