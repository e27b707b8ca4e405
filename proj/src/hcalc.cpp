#include "hrigid/hcalc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrigid/linalg.hpp"

namespace hrigid {

namespace {

HPoint frame_step(int n, int i, double h) {
  // Group-exponential step along the i-th horizontal frame field.
  VectorXcd z = VectorXcd::Zero(n);
  if (i < n)
    z[i] = h;
  else
    z[i - n] = cd(0, h);
  return HPoint(z, 0.0);
}

double fd_scale(const HPoint& x) { return std::max(1.0, knorm(x)); }

// Central difference of all coordinate functions of f along frame flow i.
VectorXd flow_central(const HMap& f, const HPoint& x, int i, double h) {
  const HPoint xp = mul(x, frame_step(f.n, i, h));
  const HPoint xm = mul(x, frame_step(f.n, i, -h));
  return (f.eval(xp).coords() - f.eval(xm).coords()) / (2.0 * h);
}

// Vertical coordinate of f(x)^{-1} f(y).
double vertical_of_relative(const HPoint& fx, const HPoint& fy) {
  return mul(inv(fx), fy).t;
}

MatrixXd analytic_m(const HMap& f, const HPoint& x, double& lambda) {
  const MatrixXd J = f.jac(x);
  const int n = f.n;
  MatrixXd M(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    const double ci = frame_vertical_coeff(x, i);
    for (int j = 0; j < 2 * n; ++j) M(j, i) = J(j, i) + ci * J(j, 2 * n);
  }
  // lambda = d_t f_t - 2 Im<z_f, d_t z_f> evaluated through the Jacobian.
  const HPoint fx = f.eval(x);
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    s += fx.z[j].imag() * J(j, 2 * n) - fx.z[j].real() * J(j + n, 2 * n);
  lambda = J(2 * n, 2 * n) - 2.0 * s;
  return M;
}

MatrixXd fd_m(const HMap& f, const HPoint& x, double h, double& lambda) {
  const int n = f.n;
  MatrixXd M(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    const VectorXd d = flow_central(f, x, i, h);
    for (int j = 0; j < 2 * n; ++j) M(j, i) = d[j];
  }
  // Vertical flow step. Kept at h (not h^2, which would "match" the gauge
  // anisotropy): the quotient divides coordinate roundoff by 2*tau, so a
  // h^2 step trades an O(h^4) truncation term nobody needs for 1e-6-scale
  // rounding noise in lambda.
  const double tau = h;
  const HPoint fx = f.eval(x);
  const double vp = vertical_of_relative(fx, f.eval(mul(x, HPoint(VectorXcd::Zero(n), tau))));
  const double vm = vertical_of_relative(fx, f.eval(mul(x, HPoint(VectorXcd::Zero(n), -tau))));
  lambda = (vp - vm) / (2.0 * tau);
  return M;
}

}  // namespace

HorizontalDifferential horiz_diff(const HMap& f, const HPoint& x, const DiffScheme& scheme) {
  HorizontalDifferential out;
  out.at = x;
  if (scheme.kind == DiffScheme::analytic) {
    if (!f.has_jac())
      throw std::invalid_argument("analytic differentiation requested for a map without a Jacobian");
    out.M = analytic_m(f, x, out.lambda);
    return out;
  }
  const double h = scheme.h * fd_scale(x);
  if (scheme.richardson) {
    double l1 = 0.0, l2 = 0.0;
    const MatrixXd m1 = fd_m(f, x, h, l1);
    const MatrixXd m2 = fd_m(f, x, 0.5 * h, l2);
    out.M = (4.0 * m2 - m1) / 3.0;
    out.lambda = (4.0 * l2 - l1) / 3.0;
  } else {
    out.M = fd_m(f, x, h, out.lambda);
  }
  return out;
}

HorizontalDifferential horiz_diff_auto(const HMap& f, const HPoint& x) {
  return horiz_diff(f, x, f.has_jac() ? DiffScheme{} : DiffScheme::fd());
}

HorizontalDifferential horiz_diff_checked(const HMap& f, const HPoint& x, double h) {
  HorizontalDifferential a = horiz_diff(f, x, DiffScheme{});
  const HorizontalDifferential b = horiz_diff(f, x, DiffScheme::fd(h));
  a.fd_mismatch = opnorm(MatrixXd(a.M - b.M)) + std::abs(a.lambda - b.lambda);
  return a;
}

MatrixXcd horiz_diff_cn(const CnMap& u, const HPoint& x, const DiffScheme& scheme) {
  const int n = u.n, m = u.m;
  MatrixXcd D(m, 2 * n);
  if (scheme.kind == DiffScheme::analytic) {
    if (!u.has_jac())
      throw std::invalid_argument("analytic differentiation requested for a map without a Jacobian");
    const MatrixXcd J = u.jac(x);
    for (int i = 0; i < 2 * n; ++i) {
      const double ci = frame_vertical_coeff(x, i);
      D.col(i) = J.col(i) + ci * J.col(2 * n);
    }
    return D;
  }
  const double h = scheme.h * fd_scale(x);
  auto fd_once = [&](double step) {
    MatrixXcd M(m, 2 * n);
    for (int i = 0; i < 2 * n; ++i) {
      const VectorXcd up = u.eval(mul(x, frame_step(n, i, step)));
      const VectorXcd um = u.eval(mul(x, frame_step(n, i, -step)));
      M.col(i) = (up - um) / (2.0 * step);
    }
    return M;
  };
  if (scheme.richardson) return (4.0 * fd_once(0.5 * h) - fd_once(h)) / 3.0;
  return fd_once(h);
}

double QValue::norm() const {
  MatrixXd stacked(sym_part.rows() + antisymplectic.rows(), sym_part.cols());
  stacked << sym_part, antisymplectic;
  return opnorm(stacked);
}

QValue q_of_matrix(const MatrixXd& m) {
  const int n = static_cast<int>(m.rows()) / 2;
  QValue q;
  q.sym_part = 0.5 * (m + m.transpose());
  const MatrixXd J = symplectic_j(n);
  q.antisymplectic = 0.5 * (m + J * m * J);
  MatrixXcd c1, c2;
  complex_parts(m, c1, c2);
  q.complex_sym = 0.5 * (c1 + c1.adjoint());
  q.complex_antiholo = c2;
  return q;
}

QValue q_apply(const CnMap& u, const HPoint& x, const DiffScheme& scheme) {
  if (u.m != u.n) throw std::invalid_argument("q_apply expects a C^n-valued map on H^n");
  const MatrixXcd D = horiz_diff_cn(u, x, scheme);
  const int n = u.n;
  MatrixXd M(2 * n, 2 * n);
  M.topRows(n) = D.real();
  M.bottomRows(n) = D.imag();
  return q_of_matrix(M);
}

double main_estimate_residual(const HMap& f, const HPoint& x, double L, const DiffScheme& scheme) {
  if (L < 1.0) throw std::invalid_argument("distortion constant must be >= 1");
  const HorizontalDifferential d = f.has_jac() || scheme.kind == DiffScheme::flow_fd
                                       ? horiz_diff(f, x, scheme)
                                       : horiz_diff(f, x, DiffScheme::fd());
  if (d.lambda <= 0.0)
    throw std::domain_error("vertical factor is not positive at the sample point");
  const int n = f.n;
  const MatrixXd Mu = d.M - MatrixXd::Identity(2 * n, 2 * n);
  const double dev = opnorm(Mu);
  const double lhs = q_of_matrix(Mu).norm();
  const double rhs = 0.5 * (L * L - 1.0) * (dev + 2.0) + 0.5 * dev * dev;
  return rhs - lhs;
}

double contact_residual(const HMap& f, const HPoint& x, const DiffScheme& scheme) {
  const int n = f.n;
  // Frame derivatives of all 2n+1 coordinate functions of f.
  MatrixXd D(2 * n + 1, 2 * n);
  if (scheme.kind == DiffScheme::analytic) {
    if (!f.has_jac())
      throw std::invalid_argument("analytic differentiation requested for a map without a Jacobian");
    const MatrixXd J = f.jac(x);
    for (int i = 0; i < 2 * n; ++i) {
      const double ci = frame_vertical_coeff(x, i);
      D.col(i) = J.col(i) + ci * J.col(2 * n);
    }
  } else {
    const double h = scheme.h * fd_scale(x);
    for (int i = 0; i < 2 * n; ++i) D.col(i) = flow_central(f, x, i, h);
  }
  const VectorXd fc = f.eval(x).coords();
  double worst = 0.0;
  for (int i = 0; i < 2 * n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += fc[j + n] * D(j, i) - fc[j] * D(j + n, i);
    worst = std::max(worst, std::abs(D(2 * n, i) - 2.0 * s));
  }
  return worst;
}

QiProbe qi_probe(const HMap& f, const Ball& region, int samples, const DiffScheme& scheme) {
  QiProbe probe;
  const auto pts = ball_lowdisc_points(region, std::max(8, samples) * 5);
  int used = 0;
  for (const HPoint& p : pts) {
    if (used++ >= samples) break;
    const HorizontalDifferential d =
        f.has_jac() || scheme.kind == DiffScheme::flow_fd ? horiz_diff(f, p, scheme)
                                                          : horiz_diff(f, p, DiffScheme::fd());
    const double smax = opnorm(d.M);
    const double smin = sigma_min(d.M);
    const double L = std::max(smax, smin > 0.0 ? 1.0 / smin
                                               : std::numeric_limits<double>::infinity());
    probe.L_lower = std::max(probe.L_lower, L);
    const double sgn = d.lambda > 0.0 ? 1.0 : (d.lambda < 0.0 ? -1.0 : 0.0);
    if (used == 1)
      probe.lambda_sign = sgn;
    else if (sgn != probe.lambda_sign)
      probe.sign_ok = false;
    if (sgn == 0.0) probe.sign_ok = false;
  }
  return probe;
}

BilipschitzProbe bilipschitz_probe(const HMap& f, const Ball& region, int pairs,
                                   std::uint64_t seed) {
  Rng rng(seed);
  BilipschitzProbe out;
  out.ratio_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    HPoint x = ball_uniform_point(region, rng);
    HPoint y = ball_uniform_point(region, rng);
    double d = kdist(x, y);
    while (d < 1e-12 * region.radius) {  // coincident pair: resample
      y = ball_uniform_point(region, rng);
      d = kdist(x, y);
    }
    const double r = kdist(f.eval(x), f.eval(y)) / d;
    out.ratio_min = std::min(out.ratio_min, r);
    out.ratio_max = std::max(out.ratio_max, r);
  }
  return out;
}

}  // namespace hrigid
