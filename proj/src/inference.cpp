#include "fuzzybeta/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuzzybeta/error.hpp"
#include "fuzzybeta/fuzzy_em.hpp"
#include "fuzzybeta/fuzzy_number.hpp"
#include "fuzzybeta/kernels.hpp"
#include "fuzzybeta/special_functions.hpp"

namespace fuzzybeta {

InformationMatrix information_from_scores(const Eigen::MatrixXd& scores) {
  const Eigen::Index p = scores.cols();
  InformationMatrix info{Eigen::MatrixXd::Zero(p, p)};
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    info.matrix.noalias() += scores.row(i).transpose() * scores.row(i);
  }
  return info;
}

InformationMatrix empirical_information(const Coefficients& coef_hat, const FilteredData& filtered,
                                        const DesignPair& design) {
  // U_i = (g1_i x_i, g2_i z_i), so the blocks are X' diag(g1^2) X etc.
  const RowGradients g =
      complete_data_row_gradients(coef_hat, filtered.y1_star, filtered.y2_star, design);
  const Eigen::Index n = design.n();
  const Eigen::Index J = design.J();
  const Eigen::Index H = design.H();
  const Eigen::VectorXd w11 = g.mean.cwiseProduct(g.mean);
  const Eigen::VectorXd w12 = g.mean.cwiseProduct(g.precision);
  const Eigen::VectorXd w22 = g.precision.cwiseProduct(g.precision);

  const auto& k = kernels::active();
  Eigen::MatrixXd xx(J, J), xz(J, H), zz(H, H);
  const auto un = static_cast<std::size_t>(n);
  const auto uj = static_cast<std::size_t>(J);
  const auto uh = static_cast<std::size_t>(H);
  k.weighted_cross(design.X.data(), uj, design.X.data(), uj, un, w11.data(), xx.data());
  k.weighted_cross(design.X.data(), uj, design.Z.data(), uh, un, w12.data(), xz.data());
  k.weighted_cross(design.Z.data(), uh, design.Z.data(), uh, un, w22.data(), zz.data());

  InformationMatrix info{Eigen::MatrixXd(J + H, J + H)};
  info.matrix.topLeftCorner(J, J) = xx;
  info.matrix.topRightCorner(J, H) = xz;
  info.matrix.bottomLeftCorner(H, J) = xz.transpose();
  // the kernel sums (j, k) and (k, j) in different lane orders
  info.matrix = (0.5 * (info.matrix + info.matrix.transpose())).eval();
  info.matrix.bottomRightCorner(H, H) = zz;
  return info;
}

namespace {

bool try_inverse_diagonal(const Eigen::MatrixXd& m, Eigen::VectorXd& diag) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  if (ldlt.rcond() < 1e-14) return false;
  const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  diag = inv.diagonal();
  return diag.allFinite() && (diag.array() >= 0.0).all();
}

}  // namespace

Eigen::VectorXd standard_errors(const InformationMatrix& info, std::vector<std::string>* warnings) {
  const Eigen::MatrixXd& m = info.matrix;
  if (m.rows() != m.cols() || m.rows() == 0) throw InferenceError("information matrix must be square");
  if (!m.allFinite()) throw InferenceError("information matrix has non-finite entries");
  Eigen::VectorXd diag;
  if (!try_inverse_diagonal(m, diag)) {
    const Eigen::MatrixXd ridged =
        m + 1e-10 * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    if (!try_inverse_diagonal(ridged, diag)) {
      throw InferenceError("information matrix is numerically singular even after a 1e-10 ridge");
    }
    if (warnings) warnings->push_back("information matrix near-singular; 1e-10 ridge added");
  }
  return diag.cwiseSqrt();
}

Eigen::VectorXd residuals(const Coefficients& coef, const FuzzyDataset& data) {
  const LinkedParams lp = apply_links(data.design, coef);
  Eigen::VectorXd r(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double mu = lp.mu[i];
    const double m = data.modes[i];
    if (m == mu) {
      r[i] = 0.0;
      continue;
    }
    const double xi = beta_membership(mu, BetaFuzzyNumber(m, data.spreads[i]));
    r[i] = (m - mu) * (1.0 - xi) / (mu * (1.0 - mu) / (1.0 + lp.phi[i]));
  }
  return r;
}

Quartiles residual_quantiles(const Eigen::VectorXd& r) {
  if (r.size() == 0) throw InferenceError("quantiles of an empty vector");
  std::vector<double> v(r.data(), r.data() + r.size());
  std::sort(v.begin(), v.end());
  const auto q = [&v](double prob) {
    const double h = (static_cast<double>(v.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {q(0.25), q(0.5), q(0.75)};
}

double pseudo_r2(double loglik_full, double loglik_null, Eigen::Index n,
                 std::vector<std::string>* warnings) {
  if (n <= 0) throw InferenceError("pseudo-R2 needs n > 0");
  const double nn = static_cast<double>(n);
  const double omega = 2.0 * (loglik_full - loglik_null);
  const double lambda = loglik_null / nn;
  if (lambda == 0.0) throw InferenceError("pseudo-R2 undefined for a null log-likelihood of 0");
  const double value = -omega * (1.0 - lambda) / ((omega + nn) * lambda);
  if (!(value >= 0.0 && value <= 1.0)) {
    if (warnings) {
      warnings->push_back("pseudo-R2 " + std::to_string(value) + " outside [0,1]; clamped");
    }
    if (std::isnan(value)) return 0.0;
    return std::clamp(value, 0.0, 1.0);
  }
  return value;
}

LrtResult likelihood_ratio_test(double loglik_full, double loglik_null, int df) {
  if (df <= 0) throw UsageError("likelihood-ratio test needs a positive df");
  const double statistic = std::max(0.0, 2.0 * (loglik_full - loglik_null));
  return {statistic, df, chi_square_upper_tail(statistic, df)};
}

namespace {

bool is_subset(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  return std::all_of(small.begin(), small.end(), [&big](const std::string& s) {
    return std::find(big.begin(), big.end(), s) != big.end();
  });
}

}  // namespace

LrtResult likelihood_ratio_test(const FitResult& full, const FitResult& null) {
  if (full.n_obs != null.n_obs) throw UsageError("LRT: fits use different sample sizes");
  if (!is_subset(null.mean_names, full.mean_names) ||
      !is_subset(null.precision_names, full.precision_names)) {
    throw UsageError("LRT: models are not nested");
  }
  const auto df = static_cast<int>(full.n_params() - null.n_params());
  if (df <= 0) throw UsageError("LRT: full model must have more parameters than the null");
  return likelihood_ratio_test(full.loglik, null.loglik, df);
}

double aic(double loglik, Eigen::Index n_params) {
  return 2.0 * static_cast<double>(n_params) - 2.0 * loglik;
}

}  // namespace fuzzybeta
