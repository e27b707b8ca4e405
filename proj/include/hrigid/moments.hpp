#pragma once

#include "hrigid/kernel.hpp"
#include "hrigid/maps.hpp"

namespace hrigid {

/// Side halfwidth of the moment box: Box(0, kappa/4) with
/// kappa = (4n^2+1)^{-1/4}; contained in the gauge ball B(0, 1/4).
double moment_box_radius(int n);

/// Normalized first moments of a C^n-valued map over the moment box:
///   A_ij = (3 * 2^{nu+4} / kappa^{nu+2}) * int u_i conj(z_j)
///   a_i  = (2^{nu+1} / kappa^{nu}) * int u_i
/// (nu = 2n+2), normalized so that A(z) = I and a(const) = const.
struct MomentData {
  MatrixXcd A;
  VectorXcd a;
  int quad_order = 12;
  /// Bound on the quadrature error of the entries, from comparing the
  /// requested order with order+4. NaN when the refinement pass is skipped.
  double quad_error_estimate = 0.0;
};

MomentData moments(const CnMap& u, int quad_order = 12, bool with_error_estimate = true);

/// Projection onto the kernel family (n > 1 only): u -> K(u) z + a(u) with
/// K(u) = (A(u) - A(u)*)/2. Throws std::invalid_argument for n = 1.
KernelElement project_p(const CnMap& u, int quad_order = 12);

/// Unitary correction data: V maps the left singular frame of A(u) onto its
/// right (eigen) frame, making V*A Hermitian and the projection of V*u
/// constant. Valid when sup |u - z| <= eps on B(0, 3/10) with
/// eps < sqrt(2/n) (2/kappa)^{n+1}.
struct UnitaryCorrection {
  MatrixXcd V;
  double deviation_bound = 0.0;  // n kappa^{n+1} 2^{-n} eps
  VectorXd singular_values;      // lambda_i = sqrt(mu_i)
  MatrixXcd right_frame;         // eigenvectors w_i of A*A (columns)
  MatrixXcd left_frame;          // v_i = A w_i / lambda_i (columns)
};

/// Computes the correction from the moment matrix of u. Throws
/// std::invalid_argument when eps violates its admissible bound and
/// std::domain_error when A*A has a non-positive eigenvalue (singular A).
UnitaryCorrection lemma_correction(const CnMap& u, double eps, int quad_order = 12);

/// Admissible upper bound for eps in lemma_correction.
double correction_eps_bound(int n);

}  // namespace hrigid
