#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace hrigid {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// A point of the n-th Heisenberg group: z in C^n, t in R.
/// Real coordinates are (x_1..x_n, x_{n+1}..x_{2n}, t) with z_j = x_j + i x_{j+n}.
struct HPoint {
  VectorXcd z;
  double t = 0.0;

  HPoint() = default;
  HPoint(VectorXcd z_, double t_) : z(std::move(z_)), t(t_) {}

  int n() const { return static_cast<int>(z.size()); }
  static HPoint origin(int n) { return HPoint(VectorXcd::Zero(n), 0.0); }

  /// Full real coordinate vector of length 2n+1.
  VectorXd coords() const;
  static HPoint from_coords(const VectorXd& c);
};

/// Group product: (z,t)*(w,s) = (z+w, t+s+2 Im<z,w>), <z,w> = sum z_j conj(w_j).
HPoint mul(const HPoint& x, const HPoint& y);
/// Group inverse: (-z,-t).
HPoint inv(const HPoint& x);
/// Anisotropic dilation: (s z, s^2 t). Group automorphism for s != 0.
HPoint dilate(double s, const HPoint& x);
/// The orientation-reversing automorphism (z,t) -> (conj z, -t).
HPoint conj_flip(const HPoint& x);

/// Gauge norm (|z|^4 + t^2)^{1/4}, computed as nested square roots.
double knorm(const HPoint& x);
/// Left-invariant gauge distance knorm(inv(x)*y). A genuine metric.
double kdist(const HPoint& x, const HPoint& y);

/// Homogeneous dimension 2n+2.
inline int hom_dim(int n) { return 2 * n + 2; }

/// Sandwich constant: Box(a, kr) subset B(a, r) subset Box(a, r) with k = (4n^2+1)^{-1/4}.
double box_gauge_ratio(int n);

/// Volume of the gauge ball B(*, r); r^(2n+2) * unit-ball volume,
/// the latter computed once per n to relative error 1e-8 and cached.
double ball_volume(int n, double r);
/// Volume of Box(*, r) = 2^{2n+1} r^{2n+2}.
double box_volume(int n, double r);
/// Integral of |z_i|^2 over Box(0,r) = 2^{2n+2} r^{2n+4} / 3 (same for every i).
double box_second_moment(int n, double r);

/// Left-invariant frame at p: columns are the 2n+1 coordinate vectors of
/// X_1..X_n, X_{n+1}..X_{2n}, T evaluated at p. X_i = d_i + 2 x_{i+n} d_t,
/// X_{i+n} = d_{i+n} - 2 x_i d_t, T = d_t.
MatrixXd frame_vectors(const HPoint& p);

/// Coefficient of d_t in the i-th horizontal frame field at p (0-based i < 2n).
double frame_vertical_coeff(const HPoint& p, int i);

/// Gauge ball / box regions (radius of a box is its horizontal half-width;
/// vertical half-width is radius^2).
struct Ball {
  HPoint center;
  double radius = 1.0;
};
struct BoxRegion {
  HPoint center;
  double radius = 1.0;
};

}  // namespace hrigid
