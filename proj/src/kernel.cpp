#include "hrigid/kernel.hpp"

#include <stdexcept>

#include "hrigid/linalg.hpp"

namespace hrigid {

KernelElement KernelElement::general(const MatrixXcd& K, const VectorXcd& a) {
  if (K.rows() != a.size()) throw std::invalid_argument("kernel element size mismatch");
  if (opnorm(MatrixXcd(K + K.adjoint())) > 1e-12)
    throw std::invalid_argument("linear part must be skew-Hermitian");
  KernelElement e;
  e.n = static_cast<int>(a.size());
  e.K = K;
  e.a = a;
  return e;
}

KernelElement KernelElement::dim1(cd a, double k, cd b) {
  KernelElement e;
  e.n = 1;
  e.K = MatrixXcd::Constant(1, 1, cd(0, k));
  e.a = VectorXcd::Constant(1, a);
  e.b = b;
  e.special_n1 = true;
  return e;
}

CnMap KernelElement::as_map() const {
  CnMap u;
  u.n = n;
  u.m = n;
  if (!special_n1) {
    const MatrixXcd K_ = K;
    const VectorXcd a_ = a;
    u.eval = [K_, a_](const HPoint& x) { return VectorXcd(a_ + K_ * x.z); };
    const int nn = n;
    u.jac = [K_, nn](const HPoint&) {
      MatrixXcd J(nn, 2 * nn + 1);
      J.leftCols(nn) = K_;
      J.middleCols(nn, nn) = cd(0, 1) * K_;
      J.col(2 * nn).setZero();
      return J;
    };
    u.label = "kernel";
    return u;
  }
  const cd a0 = a[0], b0 = b;
  const double k0 = K(0, 0).imag();
  u.eval = [a0, k0, b0](const HPoint& x) {
    const cd z = x.z[0];
    const cd v = a0 + cd(0, k0) * z + x.t * b0 + cd(0, 1) * z * z * std::conj(b0) +
                 cd(0, 1) * std::norm(z) * b0;
    return VectorXcd::Constant(1, v).eval();
  };
  u.jac = [a0, k0, b0](const HPoint& x) {
    const cd z = x.z[0];
    MatrixXcd J(1, 3);
    J(0, 0) = cd(0, k0) + cd(0, 2) * z * std::conj(b0) + cd(0, 2) * z.real() * b0;
    J(0, 1) = -k0 - 2.0 * z * std::conj(b0) + cd(0, 2) * z.imag() * b0;
    J(0, 2) = b0;
    return J;
  };
  u.label = "kernel1";
  return u;
}

KernelElement random_kernel_element(int n, Rng& rng, double scale) {
  if (n == 1) {
    return KernelElement::dim1(cd(scale * rng.normal(), scale * rng.normal()),
                               scale * rng.normal(),
                               cd(scale * rng.normal(), scale * rng.normal()));
  }
  MatrixXcd G(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) G(r, c) = scale * cd(rng.normal(), rng.normal());
  const MatrixXcd K = 0.5 * (G - G.adjoint());
  return KernelElement::general(K, scale * rng.normal_cvector(n));
}

}  // namespace hrigid
