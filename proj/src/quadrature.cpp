#include "fuzzybeta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "fuzzybeta/error.hpp"

namespace fuzzybeta {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kMaxT = 6.5;
constexpr int kMinLevel = 3;
constexpr int kMaxLevel = 7;

struct Piece {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Piece& other) const { return error < other.error; }
};

class TanhSinh {
public:
  TanhSinh(const GapIntegrand& f, double range_lo, double range_hi, long& evaluations)
      : f_(f), range_lo_(range_lo), range_hi_(range_hi), evaluations_(evaluations) {}

  // Integrates over [lo, hi], a subinterval of the full range. Returns (value, error).
  std::pair<double, double> operator()(double lo, double hi, double target) const {
    const double half = 0.5 * (hi - lo);
    double sum = node(lo, hi, half, 0.0);
    // Level 0: unit step.
    for (double t = 1.0; t <= kMaxT; t += 1.0) sum += node(lo, hi, half, t) + node(lo, hi, half, -t);
    double step = 1.0;
    double estimate = half * step * sum;
    double error = std::abs(estimate);
    for (int level = 1; level <= kMaxLevel; ++level) {
      step *= 0.5;
      double added = 0.0;
      for (double t = step; t <= kMaxT; t += 2.0 * step) {
        added += node(lo, hi, half, t) + node(lo, hi, half, -t);
      }
      sum += added;
      const double refined = half * step * sum;
      error = std::abs(refined - estimate);
      estimate = refined;
      if (level >= kMinLevel && error <= target) break;
    }
    return {estimate, error};
  }

private:
  double node(double lo, double hi, double half, double t) const {
    const double u = kHalfPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double weight = kHalfPi * std::cosh(t) / (cu * cu);
    if (!(weight > 0.0) || !std::isfinite(weight)) return 0.0;
    // Distances to the local ends: half (1 + tanh u) and half (1 - tanh u).
    const double e = std::exp(-2.0 * std::abs(u));
    const double near = half * 2.0 * e / (1.0 + e);
    if (near <= 0.0) return 0.0;
    double x;
    double gap_lo;
    double gap_hi;
    if (t < 0.0) {
      x = lo + near;
      gap_lo = (lo == range_lo_) ? near : x - range_lo_;
      gap_hi = range_hi_ - x;
    } else {
      x = hi - near;
      gap_hi = (hi == range_hi_) ? near : range_hi_ - x;
      gap_lo = x - range_lo_;
    }
    if (gap_lo <= 0.0 || gap_hi <= 0.0) return 0.0;
    // A node that rounded onto an end is moved one ulp inside; the gaps stay exact.
    if (x <= range_lo_) x = std::nextafter(range_lo_, range_hi_);
    if (x >= range_hi_) x = std::nextafter(range_hi_, range_lo_);
    ++evaluations_;
    const double fx = f_(x, gap_lo, gap_hi);
    if (!std::isfinite(fx)) {
      throw DomainError("integrand is not finite at x = " + std::to_string(x));
    }
    return weight * fx;
  }

  const GapIntegrand& f_;
  double range_lo_;
  double range_hi_;
  long& evaluations_;
};

}  // namespace

QuadratureResult integrate(const GapIntegrand& f, double lo, double hi, double tol,
                           const QuadratureOptions& options) {
  if (!(tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("integrate: need finite lo < hi");
  }
  QuadratureResult result;
  const TanhSinh rule(f, lo, hi, result.evaluations);
  const double width = hi - lo;
  auto local_target = [&](double a, double b) { return 0.1 * tol * (b - a) / width; };

  std::priority_queue<Piece> pieces;
  const int initial = std::max(1, options.initial_pieces);
  for (int k = 0; k < initial; ++k) {
    const double a = (k == 0) ? lo : lo + width * k / initial;
    const double b = (k == initial - 1) ? hi : lo + width * (k + 1) / initial;
    auto [v, e] = rule(a, b, local_target(a, b));
    pieces.push({a, b, v, e});
  }

  auto totals = [&pieces]() {
    // Sum in a fixed order so the result does not depend on heap layout.
    std::vector<Piece> all;
    auto copy = pieces;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : all) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  double error_sum = 0.0;
  {
    auto copy = pieces;
    while (!copy.empty()) {
      error_sum += copy.top().error;
      copy.pop();
    }
  }
  while (error_sum > tol) {
    if (static_cast<int>(pieces.size()) >= options.max_subintervals) {
      auto [value, error] = totals();
      throw AccuracyError("integrate: subdivision budget exhausted", value, error);
    }
    const Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      auto [value, error] = totals();
      throw AccuracyError("integrate: interval cannot be bisected further", value, error);
    }
    auto [v1, e1] = rule(worst.lo, mid, local_target(worst.lo, mid));
    auto [v2, e2] = rule(mid, worst.hi, local_target(mid, worst.hi));
    pieces.push({worst.lo, mid, v1, e1});
    pieces.push({mid, worst.hi, v2, e2});
    error_sum += e1 + e2 - worst.error;
  }
  auto [value, error] = totals();
  result.value = value;
  result.error_estimate = error;
  result.subintervals = static_cast<int>(pieces.size());
  return result;
}

double adaptive_quadrature(const std::function<double(double)>& f, double lo, double hi,
                           double tol) {
  return integrate([&f](double x, double, double) { return f(x); }, lo, hi, tol).value;
}

}  // namespace fuzzybeta
