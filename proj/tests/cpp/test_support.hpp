#pragma once

// Shared builders for the correction-lemma test family. The perturbation is
// smooth and bounded with an explicitly controlled skew moment component:
// the |V - I| bound of the correction scales with the skew part of the
// perturbation's moment matrix, so the family keeps that part at 40% of the
// bound's constant and the rest of the perturbation moment-Hermitian
// (Hermitian linear + constant + radial terms leave V at identity alone).

#include <algorithm>
#include <cmath>

#include "hrigid/linalg.hpp"
#include "hrigid/maps.hpp"
#include "hrigid/sampling.hpp"
#include "hrigid/types.hpp"

namespace hrigid_test {

using namespace hrigid;

struct PerturbedMap {
  CnMap map;
  double eps = 0.0;  // certified sup bound of |u - z| on B(0, 3/10)
};

// u = z + eps * (H z + s K z + c + r (|z|^2 - m) z) / L, with H Hermitian,
// K skew-Hermitian, and L an analytic bound making sup_{B(0,3/10)} |u-z| <= eps.
inline PerturbedMap correction_test_map(int n, double eps, Rng& rng) {
  MatrixXcd g(n, n), g2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = cd(rng.normal(), rng.normal());
      g2(i, j) = cd(rng.normal(), rng.normal());
    }
  MatrixXcd H = 0.5 * (g + g.adjoint());
  H /= std::max(1.0, opnorm(H));
  MatrixXcd K = 0.5 * (g2 - g2.adjoint());
  K /= std::max(1e-12, opnorm(K));
  const double skew_scale = 0.4 * n * std::pow(box_gauge_ratio(n), n + 1) * std::pow(2.0, -n);
  VectorXcd c = rng.normal_cvector(n);
  c /= std::max(1.0, c.norm());
  const double r = 0.3, m = 0.05;

  // sup bounds on B(0, 3/10): |z| <= 0.3 there.
  const double L = 0.3 + skew_scale * 0.3 + 1.0 + r * (0.09 + m) * 0.3;

  MatrixXcd lin = (H + skew_scale * K) / L;
  VectorXcd cc = c / L;
  const double rr = r / L;

  PerturbedMap out;
  out.eps = eps;
  out.map.n = n;
  out.map.m = n;
  out.map.label = "correction-test";
  out.map.eval = [=](const HPoint& p) -> VectorXcd {
    double zz = p.z.squaredNorm();
    return p.z + eps * (lin * p.z + cc + rr * (zz - m) * p.z);
  };
  out.map.jac = [=](const HPoint& p) -> MatrixXcd {
    MatrixXcd j = MatrixXcd::Zero(n, 2 * n + 1);
    double zz = p.z.squaredNorm();
    for (int k = 0; k < n; ++k) {
      for (int q = 0; q < n; ++q) {
        // d z_k / d x_q = delta, d z_k / d x_{q+n} = i delta
        cd base_x = (k == q) ? cd(1.0, 0.0) : cd(0.0, 0.0);
        cd base_y = (k == q) ? cd(0.0, 1.0) : cd(0.0, 0.0);
        double xq = p.z(q).real(), yq = p.z(q).imag();
        j(k, q) = base_x + eps * (lin(k, q) + rr * (2.0 * xq * p.z(k) + (zz - m) * base_x));
        j(k, q + n) =
            base_y + eps * (cd(0.0, 1.0) * lin(k, q) +
                            rr * (2.0 * yq * p.z(k) + (zz - m) * base_y));
      }
      j(k, 2 * n) = 0.0;
    }
    return j;
  };
  return out;
}

}  // namespace hrigid_test
