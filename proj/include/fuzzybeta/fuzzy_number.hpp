#pragma once

// Beta and trapezoidal fuzzy numbers on the unit interval.
//
// A beta fuzzy number with mode m in (0,1) and precision s >= 0 has membership
//
//   xi(y) = y^(m s) (1 - y)^(s (1 - m)) / C,   C = m^(m s) (1 - m)^(s (1 - m)),
//
// i.e. a beta kernel with exponents a - 1 = m s and b - 1 = s (1 - m), scaled so
// that xi(m) = 1. Large s means a nearly crisp rating; s = 0 is the vacuous
// fuzzy set (xi == 1 on [0,1]). All evaluation is done in log space.

namespace fuzzybeta {

class BetaFuzzyNumber {
public:
  // Throws DomainError unless 0 < mode < 1 and precision >= 0 (finite).
  BetaFuzzyNumber(double mode, double precision);

  double mode() const noexcept { return mode_; }
  double precision() const noexcept { return precision_; }
  // Beta-kernel shapes a = 1 + m s and b = 1 + s (1 - m).
  double shape_a() const noexcept { return 1.0 + mode_ * precision_; }
  double shape_b() const noexcept { return 1.0 + precision_ * (1.0 - mode_); }

private:
  double mode_;
  double precision_;
};

struct TrapezoidalFuzzyNumber {
  double a;  // support lower
  double b;  // core lower
  double c;  // core upper
  double d;  // support upper

  // 0 <= a <= b <= c <= d <= 1. Throws DomainError.
  void validate() const;
  double area() const noexcept { return 0.5 * ((d - a) + (c - b)); }
};

struct AlphaCut {
  double lower;
  double upper;
  double alpha;
};

enum class CentroidKind {
  normalized,    // int y xi / int xi
  unnormalized,  // int y xi, as printed without the denominator
};

// log C; C := 1 at s = 0.
double log_normalization_constant(double mode, double precision);
double normalization_constant(double mode, double precision);

double log_beta_membership(double y, const BetaFuzzyNumber& fn);
double beta_membership(double y, const BetaFuzzyNumber& fn);

// Area under the membership curve, B(a, b) / C.
double beta_area(const BetaFuzzyNumber& fn);

// Bisection on each side of the mode to absolute tolerance 1e-10.
AlphaCut alpha_cut(const BetaFuzzyNumber& fn, double alpha);

double defuzzify_centroid(const BetaFuzzyNumber& fn,
                          CentroidKind kind = CentroidKind::normalized);
double defuzzify_first_maximum(const BetaFuzzyNumber& fn);

double trapezoid_membership(double y, const TrapezoidalFuzzyNumber& tz);

// Beta fuzzy number whose area matches the trapezoid's (|delta| <= 1e-8 relative).
// Only the area enters the objective, so every mode admits an exact match;
// the mode is kept at the core midpoint (clamped into the open interval) and
// the precision is found by bisection, the area being decreasing in s.
// Throws ConversionError for zero-area trapezoids.
BetaFuzzyNumber trapezoid_to_beta(const TrapezoidalFuzzyNumber& tz);

// |area(tz) - area(beta(m, s))|
double area_mismatch(const TrapezoidalFuzzyNumber& tz, double mode, double precision);

// Mode clamping policy for values read from data files.
enum class BoundaryPolicy { clamp, reject };
inline constexpr double kModeClampEpsilon = 1e-6;

// Clamps a raw mode into [1e-6, 1 - 1e-6] (returns true if it moved) or
// throws DomainError under BoundaryPolicy::reject.
bool sanitize_mode(double& mode, BoundaryPolicy policy);

}  // namespace fuzzybeta
