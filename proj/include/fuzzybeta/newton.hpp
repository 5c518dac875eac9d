#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace fuzzybeta {

struct SolverConfig {
  int max_iterations = 200;
  double step_tolerance = 1e-10;
  double residual_tolerance = 1e-8;
  double damping_factor = 0.5;

  void validate() const;
};

using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFunction = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct NewtonResult {
  Eigen::VectorXd x;
  // Infinity norm of F at the start and after every accepted step.
  std::vector<double> residual_trace;
  int iterations = 0;
  int ridge_steps = 0;
};

// Central finite-difference Jacobian of F at x.
Eigen::MatrixXd finite_difference_jacobian(const VectorFunction& F, const Eigen::VectorXd& x);

// Damped Newton iteration for F(x) = 0.
//
// The Newton direction is halved (by damping_factor) until ||F||_inf
// decreases. A numerically singular Jacobian, or a direction along which no
// reduction is found, is retried with a Levenberg ridge step. Without a
// jacobian callback the Jacobian is taken by central differences.
// Throws SolverError (with the residual trace) on failure.
NewtonResult damped_newton_root(const VectorFunction& F, const JacobianFunction& jacobian,
                                const Eigen::VectorXd& x0, const SolverConfig& cfg = {});

}  // namespace fuzzybeta
