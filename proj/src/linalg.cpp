#include "hrigid/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hrigid {

double opnorm(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXd>(m).singularValues()(0);
}

double opnorm(const MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXcd>(m).singularValues()(0);
}

double sigma_min(const MatrixXd& m) {
  Eigen::JacobiSVD<MatrixXd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

MatrixXd realify(const MatrixXcd& c) {
  const int n = static_cast<int>(c.rows());
  MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = c.real();
  m.topRightCorner(n, n) = -c.imag();
  m.bottomLeftCorner(n, n) = c.imag();
  m.bottomRightCorner(n, n) = c.real();
  return m;
}

MatrixXd realify_antilinear(const MatrixXcd& c) {
  const int n = static_cast<int>(c.rows());
  MatrixXd m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = c.real();
  m.topRightCorner(n, n) = c.imag();
  m.bottomLeftCorner(n, n) = c.imag();
  m.bottomRightCorner(n, n) = -c.real();
  return m;
}

void complex_parts(const MatrixXd& m, MatrixXcd& c1, MatrixXcd& c2) {
  const int n = static_cast<int>(m.rows()) / 2;
  const MatrixXd xx = m.topLeftCorner(n, n), xy = m.topRightCorner(n, n);
  const MatrixXd yx = m.bottomLeftCorner(n, n), yy = m.bottomRightCorner(n, n);
  c1 = 0.5 * ((xx + yy).cast<cd>() + cd(0, 1) * (yx - xy).cast<cd>());
  c2 = 0.5 * ((xx - yy).cast<cd>() + cd(0, 1) * (yx + xy).cast<cd>());
}

MatrixXd symplectic_j(int n) {
  MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
  return j;
}

HermitianEigen hermitian_eigen_jacobi(const MatrixXcd& h) {
  const int n = static_cast<int>(h.rows());
  MatrixXcd a = 0.5 * (h + h.adjoint());  // enforce exact Hermitian symmetry
  MatrixXcd v = MatrixXcd::Identity(n, n);
  const double scale = std::max(1e-300, a.norm());
  const double tol = 1e-15 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) <= tol) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cd apq = a(p, q);
        const double absq = std::abs(apq);
        if (absq <= tol * 1e-2) continue;
        // Phase that makes the (p,q) entry real positive, then a real
        // 2x2 Jacobi rotation annihilating it.
        const cd u = std::conj(apq) / absq;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * absq);
        const double tt = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                       : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + tt * tt);
        const double s = tt * c;
        // Columns (p,q) of the combined unitary G = diag(1,u) * R(c,s):
        //   G(p,p)=c, G(p,q)=s, G(q,p)=-s*u, G(q,q)=c*u.
        const cd gpp = c, gpq = s, gqp = -s * u, gqq = c * u;
        // a <- G* a G, applied as column then row updates.
        for (int r = 0; r < n; ++r) {
          const cd arp = a(r, p), arq = a(r, q);
          a(r, p) = arp * gpp + arq * gqp;
          a(r, q) = arp * gpq + arq * gqq;
        }
        for (int r = 0; r < n; ++r) {
          const cd apr = a(p, r), aqr = a(q, r);
          a(p, r) = std::conj(gpp) * apr + std::conj(gqp) * aqr;
          a(q, r) = std::conj(gpq) * apr + std::conj(gqq) * aqr;
        }
        for (int r = 0; r < n; ++r) {
          const cd vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp * gpp + vrq * gqp;
          v(r, q) = vrp * gpq + vrq * gqq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

MatrixXcd polar_unitary(const MatrixXcd& c) {
  const HermitianEigen e = hermitian_eigen_jacobi(c.adjoint() * c);
  if (e.values.minCoeff() <= 0.0)
    throw std::domain_error("polar factor of a singular matrix");
  MatrixXcd inv_sqrt = MatrixXcd::Zero(c.rows(), c.cols());
  for (int k = 0; k < e.values.size(); ++k)
    inv_sqrt += (1.0 / std::sqrt(e.values[k])) * e.vectors.col(k) * e.vectors.col(k).adjoint();
  return c * inv_sqrt;
}

MatrixXcd exp_skew(const MatrixXcd& k) {
  const MatrixXcd ik = cd(0, 1) * k;  // Hermitian when k is skew-Hermitian
  const HermitianEigen e = hermitian_eigen_jacobi(ik);
  MatrixXcd out = MatrixXcd::Zero(k.rows(), k.cols());
  for (int j = 0; j < e.values.size(); ++j)
    out += std::exp(cd(0, -e.values[j])) * e.vectors.col(j) * e.vectors.col(j).adjoint();
  return out;
}

MatrixXcd skew_from_params(const VectorXd& p, int n) {
  if (p.size() != n * n) throw std::invalid_argument("skew parameter count must be n^2");
  MatrixXcd k = MatrixXcd::Zero(n, n);
  int idx = 0;
  for (int j = 0; j < n; ++j) k(j, j) = cd(0.0, p[idx++]);
  for (int c = 0; c < n; ++c)
    for (int r = c + 1; r < n; ++r) {
      const cd w(p[idx], p[idx + 1]);
      idx += 2;
      k(r, c) = w;
      k(c, r) = -std::conj(w);
    }
  return k;
}

double unitary_defect(const MatrixXcd& a) {
  return opnorm(MatrixXcd(a.adjoint() * a - MatrixXcd::Identity(a.rows(), a.cols())));
}

}  // namespace hrigid
