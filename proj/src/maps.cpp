#include "hrigid/maps.hpp"

#include <stdexcept>

namespace hrigid {

HMap identity_map(int n) {
  HMap f;
  f.n = n;
  f.eval = [](const HPoint& x) { return x; };
  f.jac = [n](const HPoint&) { return MatrixXd::Identity(2 * n + 1, 2 * n + 1); };
  f.label = "identity";
  return f;
}

HMap dilation_map(int n, double s) {
  HMap f;
  f.n = n;
  f.eval = [s](const HPoint& x) { return dilate(s, x); };
  f.jac = [n, s](const HPoint&) {
    VectorXd d = VectorXd::Constant(2 * n + 1, s);
    d[2 * n] = s * s;
    return MatrixXd(d.asDiagonal());
  };
  f.label = "dilation";
  return f;
}

namespace {
// Euclidean Jacobian of the left translation x -> a*x:
// identity on (z,t) except the t-row picks up 2 a_{j+n} dx_j - 2 a_j dx_{j+n}.
MatrixXd left_translation_jac(const HPoint& a) {
  const int n = a.n();
  MatrixXd J = MatrixXd::Identity(2 * n + 1, 2 * n + 1);
  for (int j = 0; j < n; ++j) {
    J(2 * n, j) = 2.0 * a.z[j].imag();
    J(2 * n, j + n) = -2.0 * a.z[j].real();
  }
  return J;
}
}  // namespace

HMap isometry_map(const Isometry& t) {
  HMap f;
  const int n = t.n();
  f.n = n;
  f.eval = [t](const HPoint& x) { return t.apply(x); };
  f.jac = [t, n](const HPoint&) {
    MatrixXd J = MatrixXd::Zero(2 * n + 1, 2 * n + 1);
    J.topLeftCorner(2 * n, 2 * n) = realify(t.A);
    J(2 * n, 2 * n) = 1.0;
    MatrixXd L = left_translation_jac(t.a);
    MatrixXd out = L * J;
    if (t.reflect) {
      out.middleRows(n, n) *= -1.0;
      out.row(2 * n) *= -1.0;
    }
    return out;
  };
  f.label = "isometry";
  return f;
}

HMap right_translation_map(const HPoint& b) {
  HMap f;
  const int n = b.n();
  f.n = n;
  f.eval = [b](const HPoint& x) { return mul(x, b); };
  f.jac = [b, n](const HPoint&) {
    MatrixXd J = MatrixXd::Identity(2 * n + 1, 2 * n + 1);
    for (int j = 0; j < n; ++j) {
      J(2 * n, j) = -2.0 * b.z[j].imag();
      J(2 * n, j + n) = 2.0 * b.z[j].real();
    }
    return J;
  };
  f.label = "right_translation";
  return f;
}

HMap compose_maps(const HMap& f, const HMap& g) {
  if (f.n != g.n) throw std::invalid_argument("composed maps must share the dimension");
  HMap h;
  h.n = f.n;
  auto fe = f.eval, ge = g.eval;
  h.eval = [fe, ge](const HPoint& x) { return fe(ge(x)); };
  if (f.has_jac() && g.has_jac()) {
    auto fj = f.jac, gj = g.jac;
    h.jac = [fe, ge, fj, gj](const HPoint& x) {
      const HPoint gx = ge(x);
      return MatrixXd(fj(gx) * gj(x));
    };
  }
  h.label = f.label + "*" + g.label;
  return h;
}

HPoint displacement(const HMap& f, const HPoint& x) { return mul(inv(x), f.eval(x)); }

CnMap horizontal_projection(const HMap& f) {
  CnMap u;
  u.n = f.n;
  u.m = f.n;
  auto fe = f.eval;
  u.eval = [fe](const HPoint& x) { return fe(x).z; };
  if (f.has_jac()) {
    auto fj = f.jac;
    const int n = f.n;
    u.jac = [fj, n](const HPoint& x) {
      const MatrixXd J = fj(x);
      MatrixXcd c(n, 2 * n + 1);
      c = J.topRows(n).cast<cd>() + cd(0, 1) * J.middleRows(n, n).cast<cd>();
      return c;
    };
  }
  u.label = f.label + ".z";
  return u;
}

CnMap displacement_projection(const HMap& f) {
  CnMap u = horizontal_projection(f);
  auto base = u.eval;
  u.eval = [base](const HPoint& x) { return VectorXcd(base(x) - x.z); };
  if (u.jac) {
    auto bj = u.jac;
    const int n = f.n;
    u.jac = [bj, n](const HPoint& x) {
      MatrixXcd c = bj(x);
      c.leftCols(n) -= MatrixXcd::Identity(n, n);
      c.middleCols(n, n) -= cd(0, 1) * MatrixXcd::Identity(n, n);
      return c;
    };
  }
  u.label = f.label + ".disp";
  return u;
}

}  // namespace hrigid
