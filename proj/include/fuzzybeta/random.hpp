#pragma once

// Reproducible random streams for the Monte Carlo harness.
//
// Every stream is a xoshiro256** generator whose state is filled by
// SplitMix64 from (seed, stream id), so replication r always sees the same
// numbers no matter which thread runs it. All variate generators are written
// out here (instead of using <random> distributions) because the standard
// library leaves their algorithms implementation-defined.

#include <cstdint>

namespace fuzzybeta {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();

private:
  std::uint64_t state_;
};

class Rng {
public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal (Marsaglia polar method).
  double normal();
  // Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 through the U^(1/shape) boost.
  double gamma(double shape);
  // log of a Gamma(shape, 1) draw; stays finite for tiny shapes.
  double log_gamma_variate(double shape);
  // Beta(a, b) as G_a / (G_a + G_b), computed from the log variates.
  double beta(double a, double b);

private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fuzzybeta
