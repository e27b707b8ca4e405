#include "hrigid/types.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "hrigid/quadrature.hpp"

namespace hrigid {

VectorXd HPoint::coords() const {
  const int nn = n();
  VectorXd c(2 * nn + 1);
  for (int j = 0; j < nn; ++j) {
    c[j] = z[j].real();
    c[j + nn] = z[j].imag();
  }
  c[2 * nn] = t;
  return c;
}

HPoint HPoint::from_coords(const VectorXd& c) {
  if (c.size() % 2 == 0) throw std::invalid_argument("coordinate vector must have odd length 2n+1");
  const int nn = static_cast<int>((c.size() - 1) / 2);
  VectorXcd z(nn);
  for (int j = 0; j < nn; ++j) z[j] = cd(c[j], c[j + nn]);
  return HPoint(z, c[2 * nn]);
}

HPoint mul(const HPoint& x, const HPoint& y) {
  const cd herm = x.z.dot(y.z);  // Eigen dot conjugates the first argument: sum conj(x_j) y_j
  // <z,w> = sum z_j conj(w_j) = conj(herm), so Im<z,w> = -Im(herm).
  return HPoint(x.z + y.z, x.t + y.t - 2.0 * herm.imag());
}

HPoint inv(const HPoint& x) { return HPoint(-x.z, -x.t); }

HPoint dilate(double s, const HPoint& x) { return HPoint(s * x.z, s * s * x.t); }

HPoint conj_flip(const HPoint& x) { return HPoint(x.z.conjugate(), -x.t); }

double knorm(const HPoint& x) {
  const double q = x.z.squaredNorm();
  return std::sqrt(std::sqrt(q * q + x.t * x.t));
}

double kdist(const HPoint& x, const HPoint& y) { return knorm(mul(inv(x), y)); }

double box_gauge_ratio(int n) { return std::pow(4.0 * n * n + 1.0, -0.25); }

double ball_volume(int n, double r) {
  static std::map<int, double> cache;
  auto it = cache.find(n);
  double unit;
  if (it != cache.end()) {
    unit = it->second;
  } else {
    // |B(0,1)| = surf(S^{2n-1}) * int_0^1 2 s^{2n-1} sqrt(1-s^4) ds,
    // with surf(S^{2n-1}) = 2 pi^n / (n-1)!.
    double surf = 2.0 * std::pow(M_PI, n);
    for (int k = 1; k <= n - 1; ++k) surf /= k;
    const double radial = adaptive_simpson(
        [n](double s) { return 2.0 * std::pow(s, 2 * n - 1) * std::sqrt(std::max(0.0, 1.0 - std::pow(s, 4))); },
        0.0, 1.0, 1e-10);
    unit = surf * radial;
    cache[n] = unit;
  }
  return std::pow(r, hom_dim(n)) * unit;
}

double box_volume(int n, double r) { return std::pow(2.0, 2 * n + 1) * std::pow(r, hom_dim(n)); }

double box_second_moment(int n, double r) {
  return std::pow(2.0, hom_dim(n)) * std::pow(r, hom_dim(n) + 2) / 3.0;
}

MatrixXd frame_vectors(const HPoint& p) {
  const int n = p.n();
  MatrixXd F = MatrixXd::Zero(2 * n + 1, 2 * n + 1);
  for (int i = 0; i < 2 * n; ++i) {
    F(i, i) = 1.0;
    F(2 * n, i) = frame_vertical_coeff(p, i);
  }
  F(2 * n, 2 * n) = 1.0;
  return F;
}

double frame_vertical_coeff(const HPoint& p, int i) {
  const int n = p.n();
  if (i < 0 || i >= 2 * n) throw std::out_of_range("horizontal frame index");
  return (i < n) ? 2.0 * p.z[i].imag() : -2.0 * p.z[i - n].real();
}

}  // namespace hrigid
