#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrigid/types.hpp"

namespace hrigid {

/// Piecewise-linear curve. Vertices run from the far end (a domain point)
/// to the base point; `cumlen` holds cumulative gauge chord lengths, so the
/// arc-length parameterization is available by interpolation.
struct Polyline {
  std::vector<HPoint> vertices;
  std::vector<double> cumlen;  // cumlen[0] = 0, nondecreasing

  static Polyline from_vertices(std::vector<HPoint> v);
  double length() const { return cumlen.empty() ? 0.0 : cumlen.back(); }
  /// Point at arc parameter s (coordinate interpolation inside a segment).
  HPoint point_at(double s) const;
};

struct JohnParams {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Bounded domain with a certified inner-distance function. The stored
/// boundary_distance is an exact lower bound for the gauge distance to the
/// complement (1-Lipschitz, positive exactly on the domain); curve_to_base
/// produces a rectifiable horizontal polyline from a point to base_point.
struct MetricDomain {
  int n = 0;
  std::string kind;  // "ball" | "box" | "dumbbell"
  std::function<bool(const HPoint&)> contains;
  std::function<double(const HPoint&)> boundary_distance;
  HPoint base_point;
  std::optional<JohnParams> john_params;  // calibrated cone constants
  std::optional<double> holder_param;     // calibrated quasihyperbolic constant
  std::function<Polyline(const HPoint&)> curve_to_base;
  double volume = 0.0;      // exact where available, else Monte-Carlo
  BoxRegion enclosure;      // group box containing the domain (sampling support)
};

MetricDomain make_ball_domain(const HPoint& c, double r);
MetricDomain make_box_domain(const HPoint& c, double r);
/// Two gauge balls joined by a tube around a horizontal connector curve;
/// `neck` is the tube radius. Throws std::invalid_argument on nonpositive
/// radii or a neck too small to keep the pieces connected.
MetricDomain make_dumbbell(const HPoint& c1, const HPoint& c2, double r1, double r2, double neck);

/// Chain of balls along the curve from the base point to x. All radii obey
/// r_i = boundary_distance(center_i)/4; `connectors` sit inside consecutive
/// intersections with radius half the smaller of the two.
struct BallChain {
  std::vector<Ball> balls;       // B_0 (base) .. B_k (at x)
  std::vector<Ball> connectors;  // G_0 .. G_{k-1}
  int k = 0;
};

/// Builds and certifies the chain: (1) endpoints, (2) radius ratios in
/// [7/9, 9/7] and connector containment, (3) the 4-fold enlargements stay
/// in the domain, (4) the count bound from the cone constants, (5) the
/// terminal ball is trapped in bounded enlargements of every member.
/// Throws std::runtime_error when any certificate fails and
/// std::invalid_argument when x is outside the domain.
BallChain build_chain(const MetricDomain& U, const HPoint& x);

/// Greedy ball family over a coordinate grid: candidate radii are a quarter
/// of the boundary distance, accepted when the 1/5-shrunk balls stay
/// pairwise disjoint; every grid point of the domain ends up covered.
struct WhitneyFamily {
  std::vector<Ball> balls;
  int multiplicity_bound = 0;  // max overlap count over centers + fixed probe set
};

WhitneyFamily whitney_cover(const MetricDomain& U, double grid_resolution);

/// Composite trapezoid of 1/boundary_distance along the polyline (in the
/// chord arc-length parameter). Throws std::domain_error when the path
/// touches the boundary.
double quasihyperbolic_length(const MetricDomain& U, const Polyline& path);

struct HolderCheck {
  double integral = 0.0;  // quasihyperbolic length of curve_to_base(x)
  double bound = 0.0;     // H log(H / boundary_distance(x))
};
/// Requires holder_param; throws std::invalid_argument otherwise.
HolderCheck holder_check(const MetricDomain& U, const HPoint& x);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of the boundary-distance integral
/// int_U boundary_distance(x)^{-tau} dx, deterministic for a fixed seed.
/// Requires 0 < tau < 1 (integrability is only asserted there).
IntegralEstimate boundary_integral(const MetricDomain& U, double tau, int mc_samples,
                                   std::uint64_t seed);

}  // namespace hrigid
