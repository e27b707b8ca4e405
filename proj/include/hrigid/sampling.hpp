#pragma once

#include <cstdint>
#include <vector>

#include "hrigid/types.hpp"

namespace hrigid {

/// Deterministic splitmix64 generator; identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  /// Uniform in [0,1).
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();
  /// Complex vector with iid standard normal real/imag parts.
  VectorXcd normal_cvector(int n);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Halton low-discrepancy sequence in [0,1)^dim (first `dim` prime bases,
/// leading entries skipped to reduce startup correlation).
class Halton {
 public:
  explicit Halton(int dim, std::uint64_t skip = 64);
  std::vector<double> next();

 private:
  int dim_;
  std::uint64_t index_;
  std::vector<int> bases_;
};

/// Deterministic low-discrepancy points of the gauge ball: Halton points of
/// the enclosing coordinate box, rejected to the ball. Always returns the
/// same set for the same (ball, count); `count` is the proposal budget.
std::vector<HPoint> ball_lowdisc_points(const Ball& b, int count);

/// Uniform random point of Box(center, r) (exactly uniform: the box is a
/// left translate of a coordinate box and translation preserves volume).
HPoint box_uniform_point(const BoxRegion& box, Rng& rng);

/// Uniform random point of the gauge ball, by rejection from its box.
HPoint ball_uniform_point(const Ball& b, Rng& rng);

}  // namespace hrigid
