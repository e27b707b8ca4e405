#include "hrigid/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hrigid/linalg.hpp"
#include "hrigid/quadrature.hpp"

namespace hrigid {

double moment_box_radius(int n) { return box_gauge_ratio(n) / 4.0; }

namespace {

// One quadrature pass at the given order; returns the un-normalized moments.
void raw_moments(const CnMap& u, int order, MatrixXcd& intA, VectorXcd& inta) {
  const int n = u.n;
  const double half = moment_box_radius(n);
  std::vector<double> hw(2 * n + 1, half);
  hw[2 * n] = half * half;  // vertical side scales with the square

  intA = MatrixXcd::Zero(n, n);
  inta = VectorXcd::Zero(n);
  tensor_box_quadrature(hw, order, [&](const std::vector<double>& coords, double w) {
    HPoint x = HPoint::from_coords(
        Eigen::Map<const VectorXd>(coords.data(), static_cast<int>(coords.size())));
    VectorXcd val = u.eval(x);
    inta += w * val;
    intA += w * (val * x.z.adjoint());  // adjoint supplies conj(z_j) per column
  });
}

}  // namespace

MomentData moments(const CnMap& u, int quad_order, bool with_error_estimate) {
  const int n = u.n;
  const int nu = 2 * n + 2;
  const double kappa = box_gauge_ratio(n);

  const double factor_A = 3.0 * std::pow(2.0, nu + 4) / std::pow(kappa, nu + 2);
  const double factor_a = std::pow(2.0, nu + 1) / std::pow(kappa, nu);

  MomentData out;
  out.quad_order = quad_order;

  MatrixXcd intA;
  VectorXcd inta;
  raw_moments(u, quad_order, intA, inta);
  out.A = factor_A * intA;
  out.a = factor_a * inta;

  if (with_error_estimate) {
    MatrixXcd intA2;
    VectorXcd inta2;
    raw_moments(u, quad_order + 4, intA2, inta2);
    double err = (factor_A * (intA2 - intA)).cwiseAbs().maxCoeff();
    err = std::max(err, (factor_a * (inta2 - inta)).cwiseAbs().maxCoeff());
    out.quad_error_estimate = err;
  } else {
    out.quad_error_estimate = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

KernelElement project_p(const CnMap& u, int quad_order) {
  if (u.n <= 1) {
    throw std::invalid_argument("project_p: defined for n > 1 only");
  }
  MomentData m = moments(u, quad_order, /*with_error_estimate=*/false);
  MatrixXcd K = 0.5 * (m.A - m.A.adjoint());
  return KernelElement::general(K, m.a);
}

double correction_eps_bound(int n) {
  const double kappa = box_gauge_ratio(n);
  return std::sqrt(2.0 / n) * std::pow(2.0 / kappa, n + 1);
}

UnitaryCorrection lemma_correction(const CnMap& u, double eps, int quad_order) {
  const int n = u.n;
  if (!(eps >= 0.0) || eps >= correction_eps_bound(n)) {
    throw std::invalid_argument("lemma_correction: eps outside admissible range");
  }
  MomentData m = moments(u, quad_order, /*with_error_estimate=*/false);
  const MatrixXcd& A = m.A;

  HermitianEigen eig = hermitian_eigen_jacobi(A.adjoint() * A);

  UnitaryCorrection out;
  out.singular_values = VectorXd(n);
  out.right_frame = eig.vectors;
  out.left_frame = MatrixXcd(n, n);
  // Degeneracy is relative: a mathematically singular moment matrix can
  // surface as a 1e-17-scale eigenvalue after quadrature and rounding.
  const double mu_floor = 1e-12 * std::max(1.0, eig.values(n - 1));
  for (int i = 0; i < n; ++i) {
    double mu = eig.values(i);
    if (!(mu > mu_floor)) {
      throw std::domain_error("lemma_correction: moment matrix is singular");
    }
    double lambda = std::sqrt(mu);
    out.singular_values(i) = lambda;
    out.left_frame.col(i) = (A * eig.vectors.col(i)) / lambda;
  }
  out.V = MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    out.V += eig.vectors.col(i) * out.left_frame.col(i).adjoint();
  }
  const double kappa = box_gauge_ratio(n);
  out.deviation_bound = n * std::pow(kappa, n + 1) * std::pow(2.0, -n) * eps;
  return out;
}

}  // namespace hrigid
