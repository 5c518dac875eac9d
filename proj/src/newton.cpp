#include "fuzzybeta/newton.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fuzzybeta/error.hpp"

namespace fuzzybeta {
namespace {

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Eigen::VectorXd newton_direction(const Eigen::MatrixXd& J, const Eigen::VectorXd& r, bool& ok) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
  const double rcond = lu.rcond();
  ok = rcond > 1e-13 && std::isfinite(rcond);
  if (!ok) return Eigen::VectorXd();
  Eigen::VectorXd dx = lu.solve(-r);
  ok = all_finite(dx);
  return dx;
}

Eigen::VectorXd ridge_direction(const Eigen::MatrixXd& J, const Eigen::VectorXd& r, double scale) {
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  const double lambda = scale * std::max(1.0, JtJ.diagonal().cwiseAbs().maxCoeff());
  Eigen::MatrixXd A = JtJ;
  A.diagonal().array() += lambda;
  return A.ldlt().solve(-J.transpose() * r);
}

// F evaluated at a trial point; domain violations count as "no improvement".
bool try_eval(const VectorFunction& F, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
  try {
    out = F(x);
  } catch (const DomainError&) {
    return false;
  }
  return all_finite(out);
}

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations <= 0) throw DomainError("SolverConfig: max_iterations must be positive");
  if (!(step_tolerance > 0.0) || !(residual_tolerance > 0.0)) {
    throw DomainError("SolverConfig: tolerances must be positive");
  }
  if (!(damping_factor > 0.0 && damping_factor < 1.0)) {
    throw DomainError("SolverConfig: damping_factor must lie in (0, 1)");
  }
}

Eigen::MatrixXd finite_difference_jacobian(const VectorFunction& F, const Eigen::VectorXd& x) {
  const Eigen::Index k = x.size();
  Eigen::MatrixXd J;
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double h = base * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const Eigen::VectorXd fp = F(xp);
    xp[j] = x[j] - h;
    const Eigen::VectorXd fm = F(xp);
    xp[j] = x[j];
    if (j == 0) J.resize(fp.size(), k);
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  return J;
}

NewtonResult damped_newton_root(const VectorFunction& F, const JacobianFunction& jacobian,
                                const Eigen::VectorXd& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (!all_finite(x0)) throw DomainError("damped_newton_root: non-finite starting point");

  NewtonResult result;
  result.x = x0;
  Eigen::VectorXd r = F(result.x);
  if (!all_finite(r)) throw SolverError("damped_newton_root: F is not finite at x0", {});
  double norm = inf_norm(r);
  result.residual_trace.push_back(norm);

  constexpr int kMaxHalvings = 60;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (norm <= cfg.residual_tolerance) return result;
    const Eigen::MatrixXd J = jacobian ? jacobian(result.x) : finite_difference_jacobian(F, result.x);

    bool ok = false;
    Eigen::VectorXd dx = newton_direction(J, r, ok);
    bool ridge = !ok;
    if (ridge) dx = ridge_direction(J, r, 1e-8);

    bool accepted = false;
    Eigen::VectorXd trial_x;
    Eigen::VectorXd trial_r;
    double step_size = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      double t = 1.0;
      for (int h = 0; h < kMaxHalvings; ++h) {
        trial_x = result.x + t * dx;
        if (try_eval(F, trial_x, trial_r) && inf_norm(trial_r) < norm) {
          accepted = true;
          step_size = t * inf_norm(dx);
          break;
        }
        t *= cfg.damping_factor;
      }
      if (!accepted && !ridge) {
        ridge = true;
        dx = ridge_direction(J, r, 1e-6);
      } else {
        break;
      }
    }
    if (!accepted) {
      throw SolverError("damped_newton_root: no step reduces the residual (||F|| = " +
                            std::to_string(norm) + ")",
                        result.residual_trace);
    }
    if (ridge) ++result.ridge_steps;
    result.x = trial_x;
    r = trial_r;
    norm = inf_norm(r);
    result.residual_trace.push_back(norm);
    result.iterations = it + 1;
    if (step_size <= cfg.step_tolerance * (1.0 + inf_norm(result.x)) &&
        norm > cfg.residual_tolerance) {
      throw SolverError("damped_newton_root: steps stalled before the residual tolerance was met",
                        result.residual_trace);
    }
  }
  if (norm <= cfg.residual_tolerance) return result;
  throw SolverError("damped_newton_root: no convergence within max_iterations",
                    result.residual_trace);
}

}  // namespace fuzzybeta
