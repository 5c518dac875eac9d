#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fuzzybeta/beta_model.hpp"

namespace testing_support {

inline fuzzybeta::DesignPair random_design(std::mt19937_64& gen, int n, int J, int H) {
  std::uniform_real_distribution<double> u(1.0, 5.0);
  fuzzybeta::DesignPair d;
  d.X.resize(n, J);
  d.Z.resize(n, H);
  d.X.col(0).setOnes();
  d.Z.col(0).setOnes();
  for (int j = 1; j < J; ++j)
    for (int i = 0; i < n; ++i) d.X(i, j) = u(gen);
  for (int h = 1; h < H; ++h)
    for (int i = 0; i < n; ++i) d.Z(i, h) = u(gen);
  return d;
}

inline fuzzybeta::Coefficients random_coefficients(std::mt19937_64& gen, int J, int H) {
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  fuzzybeta::Coefficients c{Eigen::VectorXd(J), Eigen::VectorXd(H)};
  for (int j = 0; j < J; ++j) c.beta[j] = u(gen);
  for (int h = 0; h < H; ++h) c.gamma[h] = u(gen) * 0.5;
  c.gamma[0] = 1.5 + u(gen);
  return c;
}

// Beta draws through std::gamma_distribution (independent of the library's generator).
inline Eigen::VectorXd beta_sample(std::mt19937_64& gen, const Eigen::VectorXd& mu,
                                   const Eigen::VectorXd& phi) {
  Eigen::VectorXd y(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    double v;
    do {
      std::gamma_distribution<double> ga(mu[i] * phi[i], 1.0);
      std::gamma_distribution<double> gb((1.0 - mu[i]) * phi[i], 1.0);
      const double a = ga(gen);
      const double b = gb(gen);
      v = a / (a + b);
    } while (!(v > 0.0 && v < 1.0));
    y[i] = v;
  }
  return y;
}

// Richardson-extrapolated central difference of f along coordinate k.
template <class F>
double fd_partial(const F& f, const Eigen::VectorXd& x, Eigen::Index k) {
  const double h = 1e-3 * std::max(1.0, std::abs(x[k]));
  auto central = [&](double step) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += step;
    xm[k] -= step;
    return (f(xp) - f(xm)) / (2.0 * step);
  };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

}  // namespace testing_support

#include "fuzzybeta/quadrature.hpp"

namespace testing_support {

// log of int_0^1 xi(y) f(y) dy by adaptive quadrature, with xi the beta
// membership (m, s) and f the Beta(mu phi, (1 - mu) phi) density. The density
// constant comes from std::lgamma and the integrand is rescaled by its value
// at an interior point so the relative tolerance is meaningful.
inline double quadrature_fuzzy_row(double mu, double phi, double m, double s) {
  const double a = mu * phi, b = (1.0 - mu) * phi;
  const double e1 = a - 1.0 + s * m;          // exponent of y
  const double e2 = b - 1.0 + s * (1.0 - m);  // exponent of 1 - y
  const double log_const = std::lgamma(phi) - std::lgamma(a) - std::lgamma(b) -
                           s * (m * std::log(m) + (1.0 - m) * std::log1p(-m));
  const double y0 = (e1 > 0.0 && e2 > 0.0) ? e1 / (e1 + e2) : 0.5;
  const double shift = e1 * std::log(y0) + e2 * std::log1p(-y0);
  const auto f = [=](double, double glo, double ghi) {
    return std::exp(e1 * std::log(glo) + e2 * std::log(ghi) - shift);
  };
  fuzzybeta::QuadratureOptions opt;
  opt.max_subintervals = 20000;
  const double rough = fuzzybeta::integrate(f, 0.0, 1.0, 1e-6, opt).value;
  const double fine = fuzzybeta::integrate(f, 0.0, 1.0, 1e-13 * rough, opt).value;
  return std::log(fine) + shift + log_const;
}

}  // namespace testing_support
