#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hrigid/domains.hpp"
#include "hrigid/sampling.hpp"
#include "hrigid/types.hpp"

using namespace hrigid;

namespace {

double coord_gap(const HPoint& a, const HPoint& b) {
  return (a.z - b.z).norm() + std::abs(a.t - b.t);
}

double lgamma_beta(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Independent re-certification of a chain: every stated property is
// rechecked here from raw distances, not through the builder's own code.
void recheck_chain(const MetricDomain& U, const BallChain& ch, const HPoint& x, double scale) {
  const double tol = 1e-9 * scale;
  REQUIRE(ch.balls.size() == static_cast<std::size_t>(ch.k) + 1);
  REQUIRE(ch.connectors.size() == ch.balls.size() - 1);

  CHECK(coord_gap(ch.balls.front().center, U.base_point) < tol);
  CHECK(coord_gap(ch.balls.back().center, x) < tol);

  for (std::size_t i = 0; i < ch.balls.size(); ++i) {
    const Ball& b = ch.balls[i];
    // radii are exactly a quarter of the boundary distance, so the 4-fold
    // enlargement stays in the closure of the domain
    CHECK(std::abs(U.boundary_distance(b.center) - 4.0 * b.radius) < tol);
    if (i + 1 < ch.balls.size()) {
      double ratio = b.radius / ch.balls[i + 1].radius;
      CHECK(ratio >= 7.0 / 9.0 - 1e-12);
      CHECK(ratio <= 9.0 / 7.0 + 1e-12);
      // consecutive members overlap on the connector ball
      const Ball& g = ch.connectors[i];
      CHECK(kdist(g.center, b.center) + g.radius <= b.radius + tol);
      CHECK(kdist(g.center, ch.balls[i + 1].center) + g.radius <= ch.balls[i + 1].radius + tol);
    }
  }

  // terminal ball is trapped in a bounded enlargement of every member
  REQUIRE(U.john_params.has_value());
  const double ba = U.john_params->beta / U.john_params->alpha;
  const Ball& last = ch.balls.back();
  for (const Ball& b : ch.balls) {
    CHECK(kdist(last.center, b.center) + last.radius <= (1.0 + 5.0 * ba) * b.radius + tol);
  }

  // count bound from the cone constants
  CHECK(ch.k < 9.0 * ba * std::log(8.0 * U.john_params->beta / last.radius));
}

}  // namespace

TEST_CASE("boundary distance: exact on balls, 1-Lipschitz everywhere") {
  const int n = 2;
  MetricDomain ball = make_ball_domain(HPoint::origin(n), 1.0);
  MetricDomain box = make_box_domain(HPoint::origin(n), 1.0);

  Rng rng(901);
  Ball probe{HPoint::origin(n), 1.4};  // straddles both boundaries
  for (int rep = 0; rep < 10000; ++rep) {
    HPoint x = ball_uniform_point(probe, rng);
    HPoint y = ball_uniform_point(probe, rng);
    for (const MetricDomain* U : {&ball, &box}) {
      double dx = U->boundary_distance(x), dy = U->boundary_distance(y);
      CHECK(std::abs(dx - dy) <= kdist(x, y) * (1.0 + 1e-12) + 1e-15);
      CHECK(U->contains(x) == (dx > 0.0));
    }
    CHECK(std::abs(ball.boundary_distance(x) - (1.0 - knorm(x))) < 1e-12);
  }

  // short-range continuity around the box corner region
  Rng rng2(902);
  for (int rep = 0; rep < 2000; ++rep) {
    HPoint x = ball_uniform_point(probe, rng2);
    HPoint step(1e-4 * rng2.normal_cvector(n), 1e-8 * rng2.normal());
    HPoint y = mul(x, step);
    CHECK(std::abs(box.boundary_distance(x) - box.boundary_distance(y)) <=
          kdist(x, y) * (1.0 + 1e-12) + 1e-15);
  }

  CHECK(ball.volume == doctest::Approx(ball_volume(n, 1.0)).epsilon(1e-12));
  CHECK(box.volume == doctest::Approx(box_volume(n, 1.0)).epsilon(1e-12));
}

TEST_CASE("curves to the base point stay inside and have certified length") {
  const int n = 2;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);
  REQUIRE(U.john_params.has_value());
  REQUIRE(U.holder_param.has_value());
  CHECK(U.john_params->alpha > 0.0);
  CHECK(U.john_params->alpha <= U.john_params->beta);

  Rng rng(911);
  for (int rep = 0; rep < 40; ++rep) {
    HPoint x = ball_uniform_point(Ball{HPoint::origin(n), 0.95}, rng);
    Polyline curve = U.curve_to_base(x);
    REQUIRE(curve.vertices.size() >= 2);
    CHECK(coord_gap(curve.vertices.front(), x) < 1e-12);
    CHECK(coord_gap(curve.vertices.back(), U.base_point) < 1e-12);
    CHECK(curve.length() >= kdist(x, U.base_point) * (1.0 - 1e-12));
    CHECK(curve.length() <= U.john_params->beta * (1.0 + 1e-12));

    // cumulative lengths are the chord sums, nondecreasing
    for (std::size_t j = 1; j < curve.vertices.size(); ++j) {
      double chord = kdist(curve.vertices[j - 1], curve.vertices[j]);
      CHECK(std::abs((curve.cumlen[j] - curve.cumlen[j - 1]) - chord) < 1e-12);
    }

    // the gauge norm decreases monotonically toward the center
    for (std::size_t j = 1; j < curve.vertices.size(); ++j) {
      CHECK(knorm(curve.vertices[j]) <= knorm(curve.vertices[j - 1]) + 1e-9);
    }

    // cone condition at the calibrated constants, away from the boundary
    if (U.boundary_distance(x) >= 0.05) {
      double l = curve.length();
      for (std::size_t j = 1; j + 1 < curve.vertices.size(); j += 7) {
        double s = curve.cumlen[j];
        if (s < 1e-6) continue;
        CHECK(U.boundary_distance(curve.vertices[j]) * l / s >=
              U.john_params->alpha * 0.999);
      }
    }
  }

  // arc-length lookup: endpoints and segment interior
  Polyline curve = U.curve_to_base(HPoint(VectorXcd::Constant(n, cd(0.3, 0.2)), 0.4));
  CHECK(coord_gap(curve.point_at(0.0), curve.vertices.front()) < 1e-12);
  CHECK(coord_gap(curve.point_at(curve.length()), curve.vertices.back()) < 1e-12);
  HPoint mid = curve.point_at(0.5 * curve.length());
  CHECK(U.contains(mid));
}

TEST_CASE("ball chains certify all stated properties") {
  const int n = 2;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);

  Rng rng(921);
  for (int rep = 0; rep < 50; ++rep) {
    HPoint x = ball_uniform_point(Ball{HPoint::origin(n), 0.97}, rng);
    BallChain ch = build_chain(U, x);
    recheck_chain(U, ch, x, 1.0);
  }

  // vertical-pole stress point: worst case for horizontal access
  HPoint pole(VectorXcd::Zero(n), 0.81);
  recheck_chain(U, build_chain(U, pole), pole, 1.0);

  // base point gives the single-ball chain
  BallChain at_base = build_chain(U, U.base_point);
  CHECK(at_base.k == 0);
  CHECK(at_base.connectors.empty());

  // outside points are rejected
  CHECK_THROWS_AS((void)build_chain(U, HPoint(VectorXcd::Constant(n, cd(1.0, 1.0)), 0.0)),
                  std::invalid_argument);

  // scaled and translated domain
  MetricDomain U2 = make_ball_domain(HPoint(VectorXcd::Constant(n, cd(0.5, -1.0)), 2.0), 0.25);
  HPoint y = mul(U2.base_point, HPoint(VectorXcd::Constant(n, cd(0.05, 0.02)), 0.01));
  recheck_chain(U2, build_chain(U2, y), y, 0.25);
}

TEST_CASE("greedy cover: exact 1/5-disjointness, quarter radii, stable overlap") {
  const int n = 1;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);

  WhitneyFamily fam = whitney_cover(U, 0.35);
  REQUIRE(fam.balls.size() > 10);

  // radii are exactly a quarter of the boundary distance
  for (const Ball& b : fam.balls) {
    CHECK(std::abs(U.boundary_distance(b.center) - 4.0 * b.radius) < 1e-12);
  }

  // brute-force pairwise disjointness of the 1/5-shrunk balls
  int violations = 0;
  for (std::size_t i = 0; i < fam.balls.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.balls.size(); ++j) {
      if (kdist(fam.balls[i].center, fam.balls[j].center) <
          (fam.balls[i].radius + fam.balls[j].radius) / 5.0) {
        ++violations;
      }
    }
  }
  CHECK(violations == 0);

  // overlap constant: finite, dimensional, comparable across resolutions
  WhitneyFamily fine = whitney_cover(U, 0.28);
  CHECK(fam.multiplicity_bound >= 1);
  CHECK(fine.multiplicity_bound >= 1);
  CHECK(fam.multiplicity_bound <= 243);
  CHECK(fine.multiplicity_bound <= 243);
  CHECK(fine.multiplicity_bound <= 4 * fam.multiplicity_bound + 2);

  // determinism
  WhitneyFamily again = whitney_cover(U, 0.35);
  REQUIRE(again.balls.size() == fam.balls.size());
  for (std::size_t i = 0; i < fam.balls.size(); ++i) {
    CHECK(coord_gap(again.balls[i].center, fam.balls[i].center) == 0.0);
    CHECK(again.balls[i].radius == fam.balls[i].radius);
  }

  CHECK_THROWS_AS((void)whitney_cover(U, -0.1), std::invalid_argument);
}

TEST_CASE("quasihyperbolic length against the radial closed form") {
  const int n = 2;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);

  // Straight z-ray from x to 0: chords are exact gauge distances and
  // boundary distance is 1 - s at gauge arc s, so the length is log(1/(1-|x|)).
  VectorXcd dir = VectorXcd::Zero(n);
  dir(0) = cd(1.0, 0.0);
  const double reach = 0.8;
  const int segments = 400;
  std::vector<HPoint> verts;
  for (int i = 0; i <= segments; ++i) {
    double s = reach * (1.0 - static_cast<double>(i) / segments);
    verts.push_back(HPoint(s * dir, 0.0));
  }
  Polyline path = Polyline::from_vertices(verts);
  CHECK(path.length() == doctest::Approx(reach).epsilon(1e-12));
  double expected = std::log(1.0 / (1.0 - reach));
  CHECK(quasihyperbolic_length(U, path) == doctest::Approx(expected).epsilon(1e-3));

  // paths touching the boundary are rejected
  std::vector<HPoint> bad{HPoint(1.0 * dir, 0.0), HPoint::origin(n)};
  CHECK_THROWS_AS((void)quasihyperbolic_length(U, Polyline::from_vertices(bad)),
                  std::domain_error);
}

TEST_CASE("quasihyperbolic growth certificate") {
  const int n = 2;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);
  REQUIRE(U.holder_param.has_value());

  Rng rng(931);
  for (int rep = 0; rep < 30; ++rep) {
    HPoint x = ball_uniform_point(Ball{HPoint::origin(n), 0.9}, rng);
    if (U.boundary_distance(x) < 0.05) continue;
    HolderCheck hc = holder_check(U, x);
    CHECK(hc.bound ==
          doctest::Approx(*U.holder_param * std::log(*U.holder_param / U.boundary_distance(x)))
              .epsilon(1e-12));
    CHECK(hc.integral <= hc.bound);
  }

  CHECK_THROWS_AS((void)holder_check(U, HPoint(VectorXcd::Constant(n, cd(2.0, 0.0)), 0.0)),
                  std::invalid_argument);
}

TEST_CASE("boundary-distance integral against the Beta closed form") {
  const int n = 2;
  MetricDomain U = make_ball_domain(HPoint::origin(n), 1.0);
  const double tau = 0.1;
  const int nu = 2 * n + 2;

  // Oracle: in gauge polar coordinates |B(0,s)| = V1 s^nu, so the integral
  // is |U| nu B(nu, 1-tau).
  double oracle = U.volume * nu * lgamma_beta(static_cast<double>(nu), 1.0 - tau);
  CHECK(oracle == doctest::Approx(1.2877 * U.volume).epsilon(1e-3));

  IntegralEstimate est = boundary_integral(U, tau, 400000, 7);
  CHECK(est.value == doctest::Approx(oracle).epsilon(0.025));
  CHECK(est.std_error > 0.0);
  CHECK(est.std_error < 0.01 * est.value);

  // certified upper bound in terms of the cone constant
  REQUIRE(U.john_params.has_value());
  CHECK(est.value <= 2.0 * U.volume / std::pow(U.john_params->alpha, tau));

  // monotone in tau
  IntegralEstimate lo = boundary_integral(U, 0.01, 100000, 7);
  IntegralEstimate hi = boundary_integral(U, 0.3, 100000, 7);
  CHECK(lo.value < est.value);
  CHECK(est.value < hi.value);

  // deterministic for a fixed seed
  IntegralEstimate rep = boundary_integral(U, tau, 100000, 13);
  IntegralEstimate rep2 = boundary_integral(U, tau, 100000, 13);
  CHECK(rep.value == rep2.value);

  CHECK_THROWS_AS((void)boundary_integral(U, 1.2, 1000, 1), std::invalid_argument);
}

TEST_CASE("dumbbell domain: connected pieces, chains across the neck") {
  const int n = 2;
  HPoint c1 = HPoint::origin(n);
  HPoint c2(VectorXcd::Constant(n, cd(0.9, 0.0)), 0.3);
  MetricDomain U = make_dumbbell(c1, c2, 0.5, 0.4, 0.15);

  CHECK(U.contains(c1));
  CHECK(U.contains(c2));
  CHECK(U.volume > 0.0);

  // positive depth along the connector curve between the two centers
  Polyline bridge = U.curve_to_base(c2);
  for (const HPoint& v : bridge.vertices) CHECK(U.boundary_distance(v) > 0.0);

  // a chain from deep in the second bell back to the base certifies
  HPoint x = mul(c2, HPoint(VectorXcd::Constant(n, cd(0.05, -0.03)), 0.02));
  recheck_chain(U, build_chain(U, x), x, 0.5);

  CHECK_THROWS_AS((void)make_dumbbell(c1, c2, 0.5, 0.4, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS((void)make_dumbbell(c1, c2, -0.5, 0.4, 0.2), std::invalid_argument);
}
