#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzybeta/error.hpp"
#include "fuzzybeta/fuzzy_number.hpp"
#include "fuzzybeta/quadrature.hpp"

using namespace fuzzybeta;

TEST_CASE("membership values") {
  const BetaFuzzyNumber fn(0.5, 2.0);
  CHECK(beta_membership(0.5, fn) == 1.0);
  CHECK(beta_membership(0.0, fn) == 0.0);
  CHECK(beta_membership(1.0, fn) == 0.0);
  CHECK(beta_membership(0.25, fn) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_THROWS_AS(beta_membership(1.5, fn), DomainError);
}

TEST_CASE("invalid fuzzy numbers are rejected") {
  CHECK_THROWS_AS(BetaFuzzyNumber(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(BetaFuzzyNumber(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(BetaFuzzyNumber(0.5, -1.0), DomainError);
  CHECK_THROWS_AS(BetaFuzzyNumber(0.5, INFINITY), DomainError);
  CHECK_THROWS_AS(normalization_constant(0.5, -0.1), DomainError);
}

TEST_CASE("vacuous fuzzy number has membership one") {
  const BetaFuzzyNumber fn(0.3, 0.0);
  CHECK(beta_membership(0.0, fn) == 1.0);
  CHECK(beta_membership(0.9, fn) == 1.0);
  CHECK(normalization_constant(0.3, 0.0) == 1.0);
  CHECK(beta_area(fn) == 1.0);
}

TEST_CASE("normalization constant") {
  CHECK(normalization_constant(0.5, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(normalization_constant(0.5, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
  // C(0.8, 3) is the maximum of the kernel y^(a-1) (1-y)^(b-1); golden-section oracle.
  const double a1 = 0.8 * 3.0, b1 = 0.2 * 3.0;
  auto k = [&](double y) { return a1 * std::log(y) + b1 * std::log1p(-y); };
  double lo = 1e-9, hi = 1.0 - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double x1 = hi - 0.618033988749895 * (hi - lo);
    const double x2 = lo + 0.618033988749895 * (hi - lo);
    if (k(x1) < k(x2)) lo = x1; else hi = x2;
  }
  CHECK(normalization_constant(0.8, 3.0) == doctest::Approx(std::exp(k(0.5 * (lo + hi)))).epsilon(1e-12));
  CHECK(normalization_constant(0.8, 3.0) == doctest::Approx(0.22286094420380778).epsilon(1e-14));
}

TEST_CASE("normality and unimodality on a grid") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> um(0.01, 0.99);
  std::uniform_real_distribution<double> ls(-2.0, 4.0);
  for (int k = 0; k < 50; ++k) {
    const BetaFuzzyNumber fn(um(gen), std::pow(10.0, ls(gen)));
    double best = -1.0;
    int arg = 0;
    const int grid = 20000;
    for (int i = 0; i <= grid; ++i) {
      const double v = beta_membership(static_cast<double>(i) / grid, fn);
      CHECK(v <= 1.0);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    const double m = fn.mode();
    CHECK(std::abs(static_cast<double>(arg) / grid - m) <= 1.0 / grid);
    CHECK(beta_membership(m, fn) == 1.0);
    // monotone on each side of the mode
    double prev = 0.0;
    for (double y = 0.0; y <= m; y += m / 200.0) {
      const double v = beta_membership(y, fn);
      CHECK(v >= prev - 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("membership survives very large precision") {
  const BetaFuzzyNumber fn(0.37, 1e7);
  CHECK(beta_membership(0.37, fn) == 1.0);
  CHECK(beta_membership(0.5, fn) == 0.0);
  CHECK(std::isfinite(log_beta_membership(0.5, fn)));
  CHECK(std::isfinite(log_normalization_constant(0.37, 1e7)));
}

TEST_CASE("alpha cuts") {
  const AlphaCut c = alpha_cut(BetaFuzzyNumber(0.5, 2.0), 0.75);
  CHECK(c.lower == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(c.upper == doctest::Approx(0.75).epsilon(1e-9));
  const AlphaCut core = alpha_cut(BetaFuzzyNumber(0.3, 5.0), 1.0);
  CHECK(core.lower == 0.3);
  CHECK(core.upper == 0.3);
  const AlphaCut wide = alpha_cut(BetaFuzzyNumber(0.5, 2.0), 1e-12);
  CHECK(wide.lower < 1e-5);
  CHECK(wide.upper > 1.0 - 1e-5);
  CHECK_THROWS_AS(alpha_cut(BetaFuzzyNumber(0.5, 2.0), 0.0), DomainError);
}

TEST_CASE("alpha cuts are nested and inside the level set") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int k = 0; k < 100; ++k) {
    const BetaFuzzyNumber fn(u(gen), 0.5 + 200.0 * u(gen));
    double a1 = u(gen), a2 = u(gen);
    if (a1 > a2) std::swap(a1, a2);
    const AlphaCut c1 = alpha_cut(fn, a1);
    const AlphaCut c2 = alpha_cut(fn, a2);
    CHECK(c1.lower <= c2.lower);
    CHECK(c2.upper <= c1.upper);
    CHECK(c2.lower <= c2.upper);
    CHECK(beta_membership(c2.lower, fn) >= a2);
    CHECK(beta_membership(c2.upper, fn) >= a2);
  }
}

TEST_CASE("defuzzification") {
  CHECK(defuzzify_centroid(BetaFuzzyNumber(0.5, 2.0)) == doctest::Approx(0.5));
  CHECK(defuzzify_centroid(BetaFuzzyNumber(0.8, 3.0)) == doctest::Approx(0.68).epsilon(1e-14));
  CHECK(defuzzify_centroid(BetaFuzzyNumber(0.3, 1000.0)) ==
        doctest::Approx(301.0 / 1002.0).epsilon(1e-14));
  CHECK(defuzzify_first_maximum(BetaFuzzyNumber(0.3, 7.0)) == 0.3);
  CHECK(defuzzify_first_maximum(BetaFuzzyNumber(0.5, 0.1)) == 0.5);
  CHECK(defuzzify_first_maximum(BetaFuzzyNumber(0.99, 2.0)) == 0.99);
  for (double m : {0.1, 0.42, 0.93}) {
    const BetaFuzzyNumber fn(m, 2e4);
    CHECK(std::abs(defuzzify_centroid(fn) - defuzzify_first_maximum(fn)) <= 1e-3);
  }
}

TEST_CASE("centroid equals the ratio of quadratures") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::uniform_real_distribution<double> ls(-1.0, 3.0);
  for (int k = 0; k < 60; ++k) {
    const BetaFuzzyNumber fn(u(gen), std::pow(10.0, ls(gen)));
    const auto xi = [&](double y) { return beta_membership(y, fn); };
    const double num = adaptive_quadrature([&](double y) { return y * xi(y); }, 0.0, 1.0, 1e-13);
    const double den = adaptive_quadrature(xi, 0.0, 1.0, 1e-13);
    CHECK(std::abs(num / den - defuzzify_centroid(fn)) <= 1e-8);
    CHECK(std::abs(den - beta_area(fn)) <= 1e-9);
    CHECK(std::abs(num - defuzzify_centroid(fn, CentroidKind::unnormalized)) <= 1e-9);
  }
}

TEST_CASE("trapezoid membership") {
  const TrapezoidalFuzzyNumber tz{0.1, 0.3, 0.6, 0.9};
  CHECK(trapezoid_membership(0.45, tz) == 1.0);
  CHECK(trapezoid_membership(0.1, tz) == 0.0);
  CHECK(trapezoid_membership(0.2, tz) == doctest::Approx(0.5));
  CHECK(trapezoid_membership(0.75, tz) == doctest::Approx(0.5));
  CHECK(trapezoid_membership(0.95, tz) == 0.0);
  CHECK(tz.area() == doctest::Approx(0.55));
}

TEST_CASE("trapezoid to beta: symmetric case") {
  const TrapezoidalFuzzyNumber tz{0.2, 0.45, 0.55, 0.8};
  const BetaFuzzyNumber fn = trapezoid_to_beta(tz);
  CHECK(fn.mode() == doctest::Approx(0.5).epsilon(1e-8));
  // 1-D oracle: B(1 + s/2, 1 + s/2) 2^s = 0.35
  CHECK(fn.precision() == doctest::Approx(11.313104523502898).epsilon(1e-8));
  CHECK(area_mismatch(tz, fn.mode(), fn.precision()) <= 1e-8 * tz.area());
}

TEST_CASE("trapezoid to beta: near-triangular and random cases") {
  const BetaFuzzyNumber tri = trapezoid_to_beta({0.3, 0.5 - 1e-9, 0.5 + 1e-9, 0.7});
  CHECK(tri.mode() == doctest::Approx(0.5).epsilon(1e-7));

  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    double v[4] = {u(gen), u(gen), u(gen), u(gen)};
    std::sort(v, v + 4);
    const TrapezoidalFuzzyNumber tz{v[0], v[1], v[2], v[3]};
    if (tz.area() < 1e-6) continue;
    const BetaFuzzyNumber fn = trapezoid_to_beta(tz);
    INFO(tz.a << " " << tz.b << " " << tz.c << " " << tz.d);
    CHECK(area_mismatch(tz, fn.mode(), fn.precision()) <= 1e-8 * std::max(tz.area(), 1e-2));
    const double start = std::clamp(0.5 * (tz.b + tz.c), kModeClampEpsilon, 1.0 - kModeClampEpsilon);
    CHECK(area_mismatch(tz, fn.mode(), fn.precision()) <= area_mismatch(tz, start, 1.0) + 1e-12);
    CHECK(fn.mode() >= std::min(tz.b, start) - 1e-9);
    CHECK(fn.mode() <= std::max(tz.c, start) + 1e-9);
  }
}

TEST_CASE("degenerate trapezoids") {
  CHECK_THROWS_AS(trapezoid_to_beta({0.4, 0.4, 0.4, 0.4}), ConversionError);
  CHECK_THROWS_AS(trapezoid_to_beta({0.5, 0.4, 0.6, 0.7}), DomainError);
  const BetaFuzzyNumber vac = trapezoid_to_beta({0.0, 0.0, 1.0, 1.0});
  CHECK(vac.precision() == 0.0);
}

TEST_CASE("boundary modes") {
  double m = 0.0;
  CHECK(sanitize_mode(m, BoundaryPolicy::clamp));
  CHECK(m == kModeClampEpsilon);
  m = 1.0;
  CHECK(sanitize_mode(m, BoundaryPolicy::clamp));
  CHECK(m == 1.0 - kModeClampEpsilon);
  m = 0.4;
  CHECK_FALSE(sanitize_mode(m, BoundaryPolicy::clamp));
  CHECK(m == 0.4);
  m = 1.0;
  CHECK_THROWS_AS(sanitize_mode(m, BoundaryPolicy::reject), DomainError);
}
