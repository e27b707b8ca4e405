#include "hrigid/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <memory>
#include <numbers>
#include <unordered_map>
#include <sstream>
#include <stdexcept>

#include "hrigid/sampling.hpp"

namespace hrigid {

Polyline Polyline::from_vertices(std::vector<HPoint> v) {
  Polyline p;
  for (HPoint& x : v) {
    if (!p.vertices.empty() &&
        kdist(p.vertices.back(), x) < 1e-14 * (1.0 + knorm(x))) {
      continue;
    }
    p.vertices.push_back(std::move(x));
  }
  p.cumlen.resize(p.vertices.size(), 0.0);
  for (std::size_t j = 1; j < p.vertices.size(); ++j) {
    p.cumlen[j] = p.cumlen[j - 1] + kdist(p.vertices[j - 1], p.vertices[j]);
  }
  return p;
}

HPoint Polyline::point_at(double s) const {
  if (vertices.empty()) throw std::invalid_argument("Polyline::point_at: empty polyline");
  if (s <= 0.0) return vertices.front();
  if (s >= length()) return vertices.back();
  auto it = std::upper_bound(cumlen.begin(), cumlen.end(), s);
  std::size_t j = static_cast<std::size_t>(it - cumlen.begin());  // first cumlen > s
  double seg = cumlen[j] - cumlen[j - 1];
  double w = seg > 0.0 ? (s - cumlen[j - 1]) / seg : 0.0;
  return HPoint::from_coords((1.0 - w) * vertices[j - 1].coords() + w * vertices[j].coords());
}

namespace {

// Horizontal polyline from y to the origin in relative coordinates: a
// radial segment (sigma z, t), which keeps t fixed because the radial
// tangent sweeps no symplectic area, followed by one circular loop through
// the origin in the first complex coordinate whose swept area removes t
// exactly. Both stages only ever decrease the gauge norm.
std::vector<HPoint> descent_vertices(const HPoint& y, double chord) {
  const int n = y.n();
  const double pi = std::numbers::pi;
  std::vector<HPoint> out;
  out.push_back(y);
  // Guards against chord values so small the discretization would not fit
  // in memory (and would overflow the step count).
  auto step_count = [](double span, double chord, int floor_steps) {
    double want = std::ceil(span / chord);
    if (!(want < 5e7)) {
      throw std::invalid_argument("descent curve: chord too small for the span");
    }
    return std::max(floor_steps, static_cast<int>(want));
  };
  double zn = y.z.norm();
  if (zn > 0.0) {
    int steps = step_count(zn, chord, 1);
    for (int j = 1; j <= steps; ++j) {
      double sigma = 1.0 - static_cast<double>(j) / steps;
      out.emplace_back(sigma * y.z, y.t);
    }
  }
  const double t0 = y.t;
  if (t0 != 0.0) {
    double radius = std::sqrt(std::abs(t0) / (4.0 * pi));
    double sgn = t0 > 0.0 ? 1.0 : -1.0;
    int steps = step_count(2.0 * pi * radius, chord, 16);
    for (int j = 1; j <= steps; ++j) {
      double th = 2.0 * pi * static_cast<double>(j) / steps;
      VectorXcd z = VectorXcd::Zero(n);
      z(0) = cd(radius * (1.0 - std::cos(th)), -sgn * radius * std::sin(th));
      double t = j == steps ? 0.0 : t0 * (1.0 - (th - std::sin(th)) / (2.0 * pi));
      out.emplace_back(std::move(z), t);
    }
  }
  return out;
}

Polyline descent_from(const HPoint& center, const HPoint& x, double chord) {
  std::vector<HPoint> verts = descent_vertices(mul(inv(center), x), chord);
  for (HPoint& v : verts) v = mul(center, v);
  verts.front() = x;
  verts.back() = center;
  return Polyline::from_vertices(std::move(verts));
}

// Smallest H with H log(H / depth) >= target.
double solve_holder(double target, double depth) {
  if (target <= 0.0) return depth;
  double hi = depth * 2.0;
  while (hi * std::log(hi / depth) < target) hi *= 2.0;
  double lo = depth;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (mid * std::log(mid / depth) < target ? lo : hi) = mid;
  }
  return hi;
}

// Deterministic low-discrepancy points of the enclosure kept in the domain
// at relative depth >= depth_frac * scale.
std::vector<HPoint> enclosure_probes(const MetricDomain& dom, double scale, double depth_frac,
                                     int want) {
  std::vector<HPoint> probes;
  Halton hal(2 * dom.n + 1);
  const double big = dom.enclosure.radius;
  int guard = 0;
  while (static_cast<int>(probes.size()) < want && guard < 60000) {
    ++guard;
    std::vector<double> u = hal.next();
    VectorXd off(2 * dom.n + 1);
    for (int i = 0; i < 2 * dom.n; ++i) off(i) = (2.0 * u[i] - 1.0) * big;
    off(2 * dom.n) = (2.0 * u[2 * dom.n] - 1.0) * big * big;
    HPoint p = mul(dom.enclosure.center, HPoint::from_coords(off));
    if (dom.boundary_distance(p) >= depth_frac * scale) probes.push_back(p);
  }
  return probes;
}

// Measured cone and quasihyperbolic constants of the curve family over a
// probe set, with safety margins: alpha shrunk, beta and H inflated.
struct Calibration {
  JohnParams john;
  double holder = 0.0;
};

Calibration calibrate_domain(const MetricDomain& dom, const std::vector<HPoint>& probes) {
  double alpha = std::numeric_limits<double>::infinity();
  double beta = 0.0;
  double holder = 0.0;
  for (const HPoint& x : probes) {
    Polyline curve = dom.curve_to_base(x);
    double l = curve.length();
    if (l <= 0.0) continue;
    for (std::size_t j = 0; j < curve.vertices.size(); ++j) {
      double s = curve.cumlen[j];
      if (s < 1e-9 * l) continue;
      double rho = dom.boundary_distance(curve.vertices[j]);
      if (!(rho > 0.0)) {
        throw std::runtime_error("domain calibration: curve exits the domain");
      }
      alpha = std::min(alpha, rho * l / s);
    }
    beta = std::max(beta, l);
    holder = std::max(
        holder, solve_holder(quasihyperbolic_length(dom, curve), dom.boundary_distance(x)));
  }
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha)) {
    throw std::runtime_error("domain calibration failed: no usable probes");
  }
  Calibration cal;
  cal.john.alpha = std::min(0.9 * alpha, 1.1 * beta);
  cal.john.beta = 1.1 * beta;
  cal.holder = 1.1 * holder;
  return cal;
}

// Probes for centered star-shaped domains: gauge depth fractions crossed
// with the horizontal/vertical mixture, plus generic low-discrepancy fill.
std::vector<HPoint> star_probes(const MetricDomain& dom, const HPoint& c, double r) {
  std::vector<HPoint> probes;
  const int n = dom.n;
  for (double d : {0.02, 0.05, 0.1, 0.2, 0.4, 0.7}) {
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      for (double sign : {1.0, -1.0}) {
        double rho = (1.0 - d) * r * 0.999;
        VectorXcd z = VectorXcd::Zero(n);
        z(0) = std::pow(frac, 0.25) * rho;
        double t = sign * std::sqrt(1.0 - frac) * rho * rho;
        HPoint p = mul(c, HPoint(std::move(z), t));
        if (dom.boundary_distance(p) > 0.0) probes.push_back(p);
      }
    }
  }
  std::vector<HPoint> fill = enclosure_probes(dom, r, 0.02, 24);
  probes.insert(probes.end(), fill.begin(), fill.end());
  return probes;
}

}  // namespace

MetricDomain make_ball_domain(const HPoint& c, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("make_ball_domain: radius must be positive");
  MetricDomain d;
  d.n = c.n();
  d.kind = "ball";
  d.base_point = c;
  d.contains = [c, r](const HPoint& x) { return kdist(c, x) < r; };
  d.boundary_distance = [c, r](const HPoint& x) { return r - kdist(c, x); };
  const double chord = 0.002 * r;
  d.curve_to_base = [c, chord](const HPoint& x) { return descent_from(c, x, chord); };
  d.volume = ball_volume(d.n, r);
  d.enclosure = BoxRegion{c, r};
  Calibration cal = calibrate_domain(d, star_probes(d, c, r));
  d.john_params = cal.john;
  d.holder_param = cal.holder;
  return d;
}

MetricDomain make_box_domain(const HPoint& c, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("make_box_domain: radius must be positive");
  MetricDomain d;
  d.n = c.n();
  d.kind = "box";
  d.base_point = c;
  const int n = d.n;
  d.contains = [c, r, n](const HPoint& x) {
    VectorXd y = mul(inv(c), x).coords();
    for (int i = 0; i < 2 * n; ++i) {
      if (std::abs(y(i)) >= r) return false;
    }
    return std::abs(y(2 * n)) < r * r;
  };
  // Exact lower bound for the gauge distance to the complement: a face in
  // coordinate i needs a horizontal move of r - |y_i|; a gauge step of size
  // q moves t by at most q^2 + 2|z|q, so the vertical faces need
  // q = sqrt(|z|^2 + |r^2 - |t||) - |z|, signed by which side of the face
  // the point is on. Each term is globally 1-Lipschitz in the gauge metric.
  d.boundary_distance = [c, r, n](const HPoint& x) {
    HPoint y = mul(inv(c), x);
    VectorXd yc = y.coords();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2 * n; ++i) best = std::min(best, r - std::abs(yc(i)));
    double zn = y.z.norm();
    double w = r * r - std::abs(y.t);
    double vert = std::sqrt(zn * zn + std::abs(w)) - zn;
    return std::min(best, w >= 0.0 ? vert : -vert);
  };
  const double chord = 0.002 * r;
  d.curve_to_base = [c, chord](const HPoint& x) { return descent_from(c, x, chord); };
  d.volume = box_volume(n, r);
  d.enclosure = BoxRegion{c, r};
  Calibration cal = calibrate_domain(d, star_probes(d, c, r));
  d.john_params = cal.john;
  d.holder_param = cal.holder;
  return d;
}

MetricDomain make_dumbbell(const HPoint& c1, const HPoint& c2, double r1, double r2,
                           double neck) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || !(neck > 0.0)) {
    throw std::invalid_argument("make_dumbbell: radii and neck must be positive");
  }
  if (c1.n() != c2.n()) throw std::invalid_argument("make_dumbbell: dimension mismatch");
  MetricDomain d;
  d.n = c1.n();
  d.kind = "dumbbell";
  d.base_point = c1;
  const double scale = std::max({r1, r2, neck});

  // A neck far thinner than the span between the centers would need more
  // connector vertices than the construction can afford; reject it as
  // unusable rather than degrade the tube geometry.
  const double spacing = std::min(neck / 3.0, 0.1 * scale);
  if (!(kdist(c1, c2) / spacing < 2e5)) {
    throw std::invalid_argument("make_dumbbell: neck too thin for the distance between centers");
  }

  // Coarse horizontal connector from c2 to c1; the tube is the union of
  // neck-balls around its vertices (consecutive spacing well under neck).
  auto connector = std::make_shared<const Polyline>(descent_from(c1, c2, spacing));

  auto tube_depth = [connector, neck](const HPoint& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const HPoint& v : connector->vertices) best = std::max(best, neck - kdist(x, v));
    return best;
  };
  d.boundary_distance = [c1, c2, r1, r2, tube_depth](const HPoint& x) {
    return std::max({r1 - kdist(c1, x), r2 - kdist(c2, x), tube_depth(x)});
  };
  d.contains = [bd = d.boundary_distance](const HPoint& x) { return bd(x) > 0.0; };

  // The same connector resampled at curve resolution: chain construction
  // inspects curves vertex by vertex, so the spacing must track the chord
  // length, not the tube geometry.
  const double chord = 0.002 * scale;
  std::vector<HPoint> fine;
  for (std::size_t j = 0; j + 1 < connector->vertices.size(); ++j) {
    VectorXd a = connector->vertices[j].coords();
    VectorXd b = connector->vertices[j + 1].coords();
    double gap = kdist(connector->vertices[j], connector->vertices[j + 1]);
    int pieces = std::max(1, static_cast<int>(std::ceil(gap / chord)));
    for (int k = 0; k < pieces; ++k) {
      double w = static_cast<double>(k) / pieces;
      fine.push_back(HPoint::from_coords((1.0 - w) * a + w * b));
    }
  }
  fine.push_back(connector->vertices.back());
  auto path = std::make_shared<const Polyline>(Polyline::from_vertices(std::move(fine)));

  d.curve_to_base = [c1, c2, r1, r2, neck, chord, path](const HPoint& x) {
    if (kdist(c1, x) < r1) return descent_from(c1, x, chord);
    std::vector<HPoint> verts;
    std::size_t join = 0;  // path index where we merge (it ends at c1)
    if (kdist(c2, x) < r2) {
      verts = descent_from(c2, x, chord).vertices;
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < path->vertices.size(); ++j) {
        double dist = kdist(x, path->vertices[j]);
        if (dist < best) {
          best = dist;
          join = j;
        }
      }
      if (best >= neck) {
        throw std::invalid_argument("curve_to_base: point outside the dumbbell");
      }
      verts = descent_from(path->vertices[join], x, chord).vertices;
    }
    verts.insert(verts.end(), path->vertices.begin() + join, path->vertices.end());
    return Polyline::from_vertices(std::move(verts));
  };

  // Group-box hull of the part enclosures.
  HPoint mid(0.5 * (c1.z + c2.z), 0.5 * (c1.t + c2.t));
  double enc = 0.0;
  auto absorb = [&](const HPoint& pc, double pr) {
    HPoint rel = mul(inv(mid), pc);
    VectorXd yc = rel.coords();
    for (int i = 0; i < 2 * d.n; ++i) enc = std::max(enc, std::abs(yc(i)) + pr);
    double zr = rel.z.norm();
    enc = std::max(enc, std::sqrt(std::abs(rel.t) + pr * pr + 2.0 * zr * pr));
  };
  absorb(c1, r1);
  absorb(c2, r2);
  for (const HPoint& v : connector->vertices) absorb(v, neck);
  d.enclosure = BoxRegion{mid, enc};

  // Monte-Carlo volume over the enclosure (fixed seed: domains are value
  // objects and must not vary between constructions).
  {
    Rng rng(0x9e3779b97f4a7c15ULL);
    const int samples = 200000;
    int in = 0;
    for (int i = 0; i < samples; ++i) {
      if (d.contains(box_uniform_point(d.enclosure, rng))) ++in;
    }
    d.volume = box_volume(d.n, enc) * static_cast<double>(in) / samples;
  }

  std::vector<HPoint> probes = enclosure_probes(d, scale, 0.02, 40);
  for (double f : {0.25, 0.5, 0.75}) {  // tube interior
    probes.push_back(connector->point_at(f * connector->length()));
  }
  for (double sign : {1.0, -1.0}) {  // near-vertical in both bells
    probes.push_back(mul(c1, HPoint(VectorXcd::Zero(d.n), sign * std::pow(0.95 * r1, 2))));
    probes.push_back(mul(c2, HPoint(VectorXcd::Zero(d.n), sign * std::pow(0.95 * r2, 2))));
  }
  Calibration cal = calibrate_domain(d, probes);
  d.john_params = cal.john;
  d.holder_param = cal.holder;
  return d;
}

namespace {

void certify_chain(const MetricDomain& U, const BallChain& chain, const HPoint& x,
                   double scale) {
  auto fail = [](int prop, const std::string& detail) {
    std::ostringstream msg;
    msg << "chain certification failed: property (" << prop << "): " << detail;
    throw std::runtime_error(msg.str());
  };
  const double tol = 1e-9 * scale;
  const std::vector<Ball>& b = chain.balls;
  if (b.empty() || static_cast<int>(b.size()) != chain.k + 1) fail(1, "ball count");
  if (kdist(b.front().center, U.base_point) > tol) fail(1, "chain must start at the base point");
  if (kdist(b.back().center, x) > tol) fail(1, "chain must end at the target point");
  if (static_cast<int>(chain.connectors.size()) != chain.k) fail(2, "connector count");

  for (int i = 0; i < chain.k; ++i) {
    double ratio = b[i].radius / b[i + 1].radius;
    if (ratio < 7.0 / 9.0 - 1e-12 || ratio > 9.0 / 7.0 + 1e-12) fail(2, "radius ratio");
    const Ball& g = chain.connectors[i];
    if (std::abs(g.radius - 0.5 * std::min(b[i].radius, b[i + 1].radius)) > tol) {
      fail(2, "connector radius");
    }
    if (kdist(g.center, b[i].center) + g.radius > b[i].radius + tol ||
        kdist(g.center, b[i + 1].center) + g.radius > b[i + 1].radius + tol) {
      fail(2, "connector not inside the intersection");
    }
  }
  for (const Ball& ball : b) {
    if (U.boundary_distance(ball.center) < 4.0 * ball.radius - tol) {
      fail(3, "enlarged ball leaves the domain");
    }
  }
  if (U.john_params) {
    double ba = U.john_params->beta / U.john_params->alpha;
    double rk = b.back().radius;
    double bound = 9.0 * ba * std::log(8.0 * U.john_params->beta / rk);
    if (chain.k > 0 && !(chain.k < bound)) fail(4, "chain length exceeds the cone bound");
    for (int i = 0; i <= chain.k; ++i) {
      if (kdist(b.back().center, b[i].center) + rk > (1.0 + 5.0 * ba) * b[i].radius + tol) {
        fail(5, "terminal ball escapes an enlarged member");
      }
    }
    for (const Ball& g : chain.connectors) {
      if (kdist(b.back().center, g.center) + rk > (3.0 + 10.0 * ba) * g.radius + tol) {
        fail(5, "terminal ball escapes an enlarged connector");
      }
    }
  } else if (U.holder_param) {
    double H = *U.holder_param;
    double rk = b.back().radius;
    double bound = 9.0 * H * std::log(H / (4.0 * rk));
    if (chain.k > 0 && !(chain.k < bound)) fail(4, "chain length exceeds the growth bound");
  }
}

}  // namespace

BallChain build_chain(const MetricDomain& U, const HPoint& x) {
  if (!U.contains(x)) throw std::invalid_argument("build_chain: point outside the domain");
  const double rx = U.boundary_distance(x);
  const double rbase = U.boundary_distance(U.base_point);
  const double scale = std::max(rbase, rx);

  BallChain chain;
  if (kdist(x, U.base_point) <= 1e-12 * scale) {
    chain.balls.push_back(Ball{U.base_point, rbase / 4.0});
    chain.k = 0;
    return chain;
  }

  Polyline curve = U.curve_to_base(x);
  double max_seg = 0.0;
  for (std::size_t j = 1; j < curve.cumlen.size(); ++j) {
    max_seg = std::max(max_seg, curve.cumlen[j] - curve.cumlen[j - 1]);
  }
  if (max_seg > rx / 8.0) {
    std::ostringstream msg;
    msg << "build_chain: point too close to the boundary for the curve discretization "
        << "(segment " << max_seg << ", needs <= " << rx / 8.0 << ")";
    throw std::invalid_argument(msg.str());
  }
  for (const HPoint& v : curve.vertices) {
    if (!(U.boundary_distance(v) > 0.0)) {
      throw std::runtime_error("build_chain: curve exits the domain");
    }
  }

  // Walk from the base end of the curve toward x: each step exits the
  // half-ball of the current center exactly, found by a scan over the
  // vertices below plus a bisection inside the crossing segment.
  HPoint cur = U.base_point;
  double s_cur = curve.length();
  chain.balls.push_back(Ball{cur, rbase / 4.0});

  const int max_steps = 100000;
  for (int step = 0; step < max_steps; ++step) {
    const Ball bcur = chain.balls.back();
    const double reach = bcur.radius / 2.0;  // half-ball radius of B(cur, rho/4)

    // Vertex index range strictly below the current parameter.
    std::size_t top = 0;
    while (top + 1 < curve.cumlen.size() && curve.cumlen[top + 1] < s_cur - 1e-15) ++top;

    // Scan downward from the top; find the deepest prefix fully inside.
    std::ptrdiff_t violate = -1;
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(top); j >= 0; --j) {
      if (kdist(curve.vertices[static_cast<std::size_t>(j)], cur) > reach) {
        violate = j;
        break;
      }
    }

    HPoint next;
    double s_next = 0.0;
    if (violate < 0) {
      next = curve.vertices.front();  // the exact target point
      s_next = 0.0;
    } else {
      // Crossing lies between vertices violate and violate+1 (or between
      // violate and the off-vertex current point when they coincide).
      std::size_t lo_idx = static_cast<std::size_t>(violate);
      VectorXd a = curve.vertices[lo_idx].coords();
      double s_a = curve.cumlen[lo_idx];
      VectorXd bcoords;
      double s_b;
      if (lo_idx + 1 < curve.vertices.size() && curve.cumlen[lo_idx + 1] <= s_cur) {
        bcoords = curve.vertices[lo_idx + 1].coords();
        s_b = curve.cumlen[lo_idx + 1];
      } else {
        bcoords = cur.coords();
        s_b = s_cur;
      }
      double lo = 0.0, hi = 1.0;  // h(lo) > reach >= h(hi)
      for (int it = 0; it < 80; ++it) {
        if ((hi - lo) * (s_b - s_a) < 1e-6 * bcur.radius) break;
        double mid = 0.5 * (lo + hi);
        HPoint p = HPoint::from_coords((1.0 - mid) * a + mid * bcoords);
        (kdist(p, cur) > reach ? lo : hi) = mid;
      }
      next = HPoint::from_coords((1.0 - hi) * a + hi * bcoords);
      s_next = s_a + hi * (s_b - s_a);
    }

    double rho_next = U.boundary_distance(next);
    if (!(rho_next > 0.0)) throw std::runtime_error("build_chain: step left the domain");
    Ball bnext{next, rho_next / 4.0};

    // Connector: the group-dilated midpoint m = x_{i+1} * delta_{1/2}(x_{i+1}^{-1} x_i)
    // satisfies d(m, x_{i+1}) = d(x_i, x_{i+1})/2 exactly (homogeneity) and
    // d(m, x_i) <= (9/16)^{1/4} d(x_i, x_{i+1}), so with d(x_i, x_{i+1}) <= r_i/2
    // the connector ball of radius min(r_i, r_{i+1})/2 sits inside both members.
    HPoint conn_center = mul(next, dilate(0.5, mul(inv(next), cur)));
    Ball conn{conn_center, 0.5 * std::min(bcur.radius, bnext.radius)};

    chain.balls.push_back(bnext);
    chain.connectors.push_back(conn);
    cur = next;
    s_cur = s_next;
    if (s_next <= 0.0) break;
  }
  if (s_cur > 0.0) throw std::runtime_error("build_chain: walk failed to terminate");

  // Snap the terminal center to x exactly (it is the first curve vertex).
  chain.balls.back().center = x;
  chain.balls.back().radius = rx / 4.0;
  chain.k = static_cast<int>(chain.balls.size()) - 1;

  certify_chain(U, chain, x, scale);
  return chain;
}

WhitneyFamily whitney_cover(const MetricDomain& U, double grid_resolution) {
  if (!(grid_resolution > 0.0)) {
    throw std::invalid_argument("whitney_cover: resolution must be positive");
  }
  const int n = U.n;
  const double big = U.enclosure.radius;
  const double res = grid_resolution;

  // Center-aligned coordinate grid over the enclosure box; the vertical
  // axis steps with res^2 to match the box anisotropy.
  std::vector<int> steps(2 * n + 1);
  for (int i = 0; i < 2 * n; ++i) steps[i] = std::max(1, static_cast<int>(std::ceil(2.0 * big / res)));
  steps[2 * n] = std::max(1, static_cast<int>(std::ceil(2.0 * big * big / (res * res))));

  struct Candidate {
    HPoint p;
    double r;
  };
  std::vector<Candidate> cands;
  std::vector<int> idx(2 * n + 1, 0);
  for (;;) {
    VectorXd off(2 * n + 1);
    for (int i = 0; i < 2 * n; ++i) off(i) = -big + (idx[i] + 0.5) * (2.0 * big / steps[i]);
    off(2 * n) = -big * big + (idx[2 * n] + 0.5) * (2.0 * big * big / steps[2 * n]);
    HPoint p = mul(U.enclosure.center, HPoint::from_coords(off));
    double rho = U.boundary_distance(p);
    if (rho > 0.0) cands.push_back(Candidate{p, rho / 4.0});

    int axis = 0;
    while (axis <= 2 * n) {
      if (++idx[axis] < steps[axis]) break;
      idx[axis] = 0;
      ++axis;
    }
    if (axis > 2 * n) break;
  }
  if (cands.empty()) {
    throw std::runtime_error("whitney_cover: no candidate centers at this resolution");
  }

  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cands[a].r > cands[b].r; });

  // Spatial index over accepted balls. Every query below asks for accepted
  // centers within gauge distance <= max_r of a point (disjointness needs
  // (r_c + r_a)/5 <= 2 max_r / 5, coverage needs r_a <= max_r), and gauge
  // distance d confines the coordinates to |z_a - z_p| <= d and
  // |t_a - t_p| <= d^2 + 2 d (|z_p| + d), so with the bucket sides below a
  // +-1 cell sweep per axis is exhaustive. Exact kdist filters each member.
  const double max_r = cands[order.front()].r;
  const double zmax = U.enclosure.center.z.norm() + big * std::sqrt(2.0 * n) + max_r;
  const double zside = std::max(max_r, 1e-12);
  const double tside = std::max(max_r * max_r + 2.0 * max_r * (zmax + max_r), 1e-12);

  auto cell_key = [&](const HPoint& p) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](long long c) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    VectorXd c = p.coords();
    for (int i = 0; i < 2 * n; ++i) mix(static_cast<long long>(std::floor(c(i) / zside)));
    mix(static_cast<long long>(std::floor(c(2 * n) / tside)));
    return h;
  };
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;

  WhitneyFamily fam;
  // Enumerates the 3^{2n+1} neighbor cells of p and visits their members.
  auto for_neighbors = [&](const HPoint& p, const std::function<bool(int)>& visit) {
    VectorXd c = p.coords();
    std::vector<long long> base(2 * n + 1);
    for (int i = 0; i < 2 * n; ++i) base[i] = static_cast<long long>(std::floor(c(i) / zside));
    base[2 * n] = static_cast<long long>(std::floor(c(2 * n) / tside));
    std::vector<int> d(2 * n + 1, -1);
    for (;;) {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      for (int i = 0; i <= 2 * n; ++i) {
        std::uint64_t v = static_cast<std::uint64_t>(base[i] + d[i]);
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      }
      auto it = buckets.find(h);
      if (it != buckets.end()) {
        for (int member : it->second) {
          if (!visit(member)) return;
        }
      }
      int axis = 0;
      while (axis <= 2 * n) {
        if (++d[axis] <= 1) break;
        d[axis] = -1;
        ++axis;
      }
      if (axis > 2 * n) break;
    }
  };

  for (std::size_t oi : order) {
    const Candidate& c = cands[oi];
    bool disjoint = true;
    for_neighbors(c.p, [&](int member) {
      const Ball& a = fam.balls[member];
      if (kdist(c.p, a.center) < (c.r + a.radius) / 5.0) {
        disjoint = false;
        return false;
      }
      return true;
    });
    if (disjoint) {
      buckets[cell_key(c.p)].push_back(static_cast<int>(fam.balls.size()));
      fam.balls.push_back(Ball{c.p, c.r});
    }
  }

  // Every grid point of the domain must be covered (radius-descending
  // greedy guarantees it; verify anyway).
  for (std::size_t i = 0; i < cands.size(); ++i) {
    bool covered = false;
    for_neighbors(cands[i].p, [&](int member) {
      const Ball& a = fam.balls[member];
      if (kdist(cands[i].p, a.center) < a.radius) {
        covered = true;
        return false;
      }
      return true;
    });
    if (!covered) throw std::runtime_error("whitney_cover: grid point left uncovered");
  }

  // Overlap constant: measured on a construction-independent probe set (all
  // accepted centers plus a fixed low-discrepancy sample of the domain) so
  // covers built at different resolutions report comparable numbers.
  auto count_overlap = [&](const HPoint& p) {
    int overlap = 0;
    for_neighbors(p, [&](int member) {
      const Ball& a = fam.balls[member];
      if (kdist(p, a.center) < a.radius) ++overlap;
      return true;
    });
    return overlap;
  };
  for (const Ball& b : fam.balls) {
    fam.multiplicity_bound = std::max(fam.multiplicity_bound, count_overlap(b.center));
  }
  Halton halton(2 * n + 1);
  int probes = 0;
  for (int attempts = 0; probes < 4000 && attempts < 400000; ++attempts) {
    std::vector<double> u = halton.next();
    VectorXd off(2 * n + 1);
    for (int i = 0; i < 2 * n; ++i) off(i) = big * (2.0 * u[i] - 1.0);
    off(2 * n) = big * big * (2.0 * u[2 * n] - 1.0);
    HPoint p = mul(U.enclosure.center, HPoint::from_coords(off));
    if (!(U.boundary_distance(p) > 0.0)) continue;
    ++probes;
    fam.multiplicity_bound = std::max(fam.multiplicity_bound, count_overlap(p));
  }
  return fam;
}

double quasihyperbolic_length(const MetricDomain& U, const Polyline& path) {
  double acc = 0.0;
  for (std::size_t j = 1; j < path.vertices.size(); ++j) {
    double d0 = U.boundary_distance(path.vertices[j - 1]);
    double d1 = U.boundary_distance(path.vertices[j]);
    if (!(d0 > 0.0) || !(d1 > 0.0)) {
      throw std::domain_error("quasihyperbolic_length: path touches the boundary");
    }
    acc += 0.5 * (1.0 / d0 + 1.0 / d1) * kdist(path.vertices[j - 1], path.vertices[j]);
  }
  return acc;
}

HolderCheck holder_check(const MetricDomain& U, const HPoint& x) {
  if (!U.holder_param) throw std::invalid_argument("holder_check: no calibrated constant");
  double depth = U.boundary_distance(x);
  if (!(depth > 0.0)) throw std::invalid_argument("holder_check: point outside the domain");
  HolderCheck out;
  out.integral = quasihyperbolic_length(U, U.curve_to_base(x));
  out.bound = *U.holder_param * std::log(*U.holder_param / depth);
  return out;
}

IntegralEstimate boundary_integral(const MetricDomain& U, double tau, int mc_samples,
                                   std::uint64_t seed) {
  if (!(tau > 0.0) || tau >= 1.0) {
    throw std::invalid_argument("boundary_integral: tau must lie in (0, 1)");
  }
  if (mc_samples <= 1) throw std::invalid_argument("boundary_integral: need samples");
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < mc_samples; ++i) {
    HPoint p = box_uniform_point(U.enclosure, rng);
    double rho = U.boundary_distance(p);
    double w = rho > 0.0 ? std::pow(rho, -tau) : 0.0;
    sum += w;
    sumsq += w * w;
  }
  const double boxvol = box_volume(U.n, U.enclosure.radius);
  const double mean = sum / mc_samples;
  const double var = std::max(0.0, sumsq / mc_samples - mean * mean);
  IntegralEstimate out;
  out.value = boxvol * mean;
  out.std_error = boxvol * std::sqrt(var / mc_samples);
  return out;
}

}  // namespace hrigid
