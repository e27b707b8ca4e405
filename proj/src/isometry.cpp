#include "hrigid/isometry.hpp"

#include <stdexcept>

namespace hrigid {

Isometry::Isometry(MatrixXcd A_, HPoint a_, bool reflect_)
    : A(std::move(A_)), a(std::move(a_)), reflect(reflect_) {
  if (A.rows() != a.n() || A.cols() != a.n())
    throw std::invalid_argument("rotation size must match point dimension");
  if (unitary_defect(A) > 1e-12)
    throw std::invalid_argument("rotation part is not unitary within 1e-12");
}

Isometry Isometry::identity(int n) {
  return Isometry(MatrixXcd::Identity(n, n), HPoint::origin(n), false);
}

Isometry Isometry::translation(const HPoint& b) {
  return Isometry(MatrixXcd::Identity(b.n(), b.n()), b, false);
}

Isometry Isometry::rotation(const MatrixXcd& A) {
  return Isometry(A, HPoint::origin(static_cast<int>(A.rows())), false);
}

HPoint Isometry::apply(const HPoint& x) const {
  HPoint y = mul(a, HPoint(A * x.z, x.t));
  return reflect ? conj_flip(y) : y;
}

MatrixXd Isometry::dh() const {
  MatrixXd d = realify(A);
  if (reflect) {
    const int nn = n();
    d.bottomRows(nn) *= -1.0;  // diag(I,-I) applied after the rotation
  }
  return d;
}

Isometry compose(const Isometry& t1, const Isometry& t2) {
  // flip^e1 pi_{a1} phi_{A1} flip^e2 pi_{a2} phi_{A2}
  //   = flip^{e1^e2} pi_{flip^{e2}(a1) * phi_{A1'}(a2)} phi_{A1' A2},
  // with A1' = conj(A1) when e2 is set (flip conjugates rotations).
  const MatrixXcd a1p = t2.reflect ? t1.A.conjugate() : t1.A;
  const HPoint a1m = t2.reflect ? conj_flip(t1.a) : t1.a;
  const HPoint shift = mul(a1m, HPoint(a1p * t2.a.z, t2.a.t));
  return Isometry(a1p * t2.A, shift, t1.reflect != t2.reflect);
}

Isometry invert(const Isometry& t) {
  // theta^{-1} = phi_{A*} pi_{-a} flip^e
  //            = flip^e pi_{flip^e(phi_{A*}(-a))} phi_{A''},
  // with A'' = transpose(A) when e is set, else A*.
  const HPoint b(-(t.A.adjoint() * t.a.z), -t.a.t);
  const HPoint bm = t.reflect ? conj_flip(b) : b;
  const MatrixXcd app = t.reflect ? t.A.transpose() : MatrixXcd(t.A.adjoint());
  return Isometry(app, bm, t.reflect);
}

Isometry conjugate_by_dilation(const Isometry& t, double s) {
  if (s == 0.0) throw std::invalid_argument("dilation factor must be nonzero");
  return Isometry(t.A, dilate(s, t.a), t.reflect);
}

Isometry random_isometry(int n, Rng& rng, double rot_scale, double trans_scale,
                         bool allow_reflect) {
  VectorXd p(skew_param_count(n));
  for (int i = 0; i < p.size(); ++i) p[i] = rot_scale * rng.normal();
  const MatrixXcd A = exp_skew(skew_from_params(p, n));
  HPoint a(trans_scale * rng.normal_cvector(n), trans_scale * rng.normal());
  const bool refl = allow_reflect && (rng.uniform() < 0.5);
  return Isometry(A, a, refl);
}

}  // namespace hrigid
