#include "fuzzybeta/fuzzy_number.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fuzzybeta/error.hpp"
#include "fuzzybeta/special_functions.hpp"

namespace fuzzybeta {
namespace {

constexpr double kCutTolerance = 1e-10;

// s [m log(y/m) + (1-m) log((1-y)/(1-m))], the log membership; <= 0.
double log_kernel_ratio(double y, double m, double s) {
  if (s == 0.0) return 0.0;
  if (y <= 0.0 || y >= 1.0) return -INFINITY;
  return s * (m * std::log(y / m) + (1.0 - m) * std::log((1.0 - y) / (1.0 - m)));
}

}  // namespace

BetaFuzzyNumber::BetaFuzzyNumber(double mode, double precision)
    : mode_(mode), precision_(precision) {
  if (!(mode > 0.0 && mode < 1.0)) {
    throw DomainError("beta fuzzy number: mode must lie in (0,1), got " + std::to_string(mode));
  }
  if (!(precision >= 0.0) || !std::isfinite(precision)) {
    throw DomainError("beta fuzzy number: precision must be finite and >= 0, got " +
                      std::to_string(precision));
  }
}

void TrapezoidalFuzzyNumber::validate() const {
  const bool finite = std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
  if (!finite || !(0.0 <= a && a <= b && b <= c && c <= d && d <= 1.0)) {
    throw DomainError("trapezoid: need 0 <= a <= b <= c <= d <= 1");
  }
}

double log_normalization_constant(double mode, double precision) {
  BetaFuzzyNumber(mode, precision);  // validates
  if (precision == 0.0) return 0.0;
  return precision * (mode * std::log(mode) + (1.0 - mode) * std::log1p(-mode));
}

double normalization_constant(double mode, double precision) {
  return std::exp(log_normalization_constant(mode, precision));
}

double log_beta_membership(double y, const BetaFuzzyNumber& fn) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("membership: y must lie in [0,1]");
  return log_kernel_ratio(y, fn.mode(), fn.precision());
}

double beta_membership(double y, const BetaFuzzyNumber& fn) {
  if (y == fn.mode()) return 1.0;
  return std::exp(log_beta_membership(y, fn));
}

double beta_area(const BetaFuzzyNumber& fn) {
  if (fn.precision() == 0.0) return 1.0;
  return std::exp(log_beta(fn.shape_a(), fn.shape_b()) -
                  log_normalization_constant(fn.mode(), fn.precision()));
}

AlphaCut alpha_cut(const BetaFuzzyNumber& fn, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha_cut: alpha must lie in (0,1]");
  const double m = fn.mode();
  if (alpha == 1.0) return {m, m, alpha};
  if (fn.precision() == 0.0) return {0.0, 1.0, alpha};

  const double log_alpha = std::log(alpha);
  // Keeps the side where membership >= alpha as the returned end.
  auto solve = [&](double outside, double inside) {
    while (std::abs(inside - outside) > kCutTolerance) {
      const double mid = 0.5 * (outside + inside);
      if (log_kernel_ratio(mid, m, fn.precision()) >= log_alpha) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return inside;
  };
  return {solve(0.0, m), solve(1.0, m), alpha};
}

double defuzzify_centroid(const BetaFuzzyNumber& fn, CentroidKind kind) {
  const double m = fn.mode();
  const double s = fn.precision();
  if (kind == CentroidKind::normalized) return (1.0 + m * s) / (2.0 + s);
  // int y xi(y) dy = B(a + 1, b) / C
  if (s == 0.0) return 0.5;
  return std::exp(log_beta(fn.shape_a() + 1.0, fn.shape_b()) - log_normalization_constant(m, s));
}

double defuzzify_first_maximum(const BetaFuzzyNumber& fn) { return fn.mode(); }

double trapezoid_membership(double y, const TrapezoidalFuzzyNumber& tz) {
  if (y < tz.a || y > tz.d) return 0.0;
  if (y >= tz.b && y <= tz.c) return 1.0;
  if (y < tz.b) return (y - tz.a) / (tz.b - tz.a);
  return (tz.d - y) / (tz.d - tz.c);
}

double area_mismatch(const TrapezoidalFuzzyNumber& tz, double mode, double precision) {
  return std::abs(tz.area() - beta_area(BetaFuzzyNumber(mode, precision)));
}

namespace {

// Precision at which the beta area equals target, for 0 < target < 1.
double precision_matching_area(double mode, double target) {
  auto area = [mode](double s) { return beta_area(BetaFuzzyNumber(mode, s)); };
  double lo = 0.0;
  double hi = 1.0;
  while (area(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw ConversionError("trapezoid_to_beta: area too small to match");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (area(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Endpoint with the smaller mismatch.
  return std::abs(area(lo) - target) <= std::abs(area(hi) - target) ? lo : hi;
}

}  // namespace

BetaFuzzyNumber trapezoid_to_beta(const TrapezoidalFuzzyNumber& tz) {
  tz.validate();
  const double target = tz.area();
  if (!(target > 0.0)) throw ConversionError("trapezoid_to_beta: zero-area trapezoid");

  const double lo_mode = std::clamp(tz.b, kModeClampEpsilon, 1.0 - kModeClampEpsilon);
  const double hi_mode = std::clamp(tz.c, kModeClampEpsilon, 1.0 - kModeClampEpsilon);
  const double start = 0.5 * (lo_mode + hi_mode);
  if (target >= 1.0) return BetaFuzzyNumber(start, 0.0);

  return BetaFuzzyNumber(start, precision_matching_area(start, target));
}

bool sanitize_mode(double& mode, BoundaryPolicy policy) {
  if (mode > 0.0 && mode < 1.0) return false;
  if (policy == BoundaryPolicy::reject || std::isnan(mode)) {
    throw DomainError("mode " + std::to_string(mode) + " outside (0,1)");
  }
  mode = std::clamp(mode, kModeClampEpsilon, 1.0 - kModeClampEpsilon);
  return true;
}

}  // namespace fuzzybeta
