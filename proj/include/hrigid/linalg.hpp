#pragma once

#include "hrigid/types.hpp"

namespace hrigid {

/// Operator (spectral) norm: largest singular value. The matrix-norm
/// convention used throughout the library.
double opnorm(const MatrixXd& m);
double opnorm(const MatrixXcd& m);
double sigma_min(const MatrixXd& m);

/// Real 2n x 2n form of the complex-linear map z -> Cz in coordinates
/// (x, y): [[Re C, -Im C], [Im C, Re C]].
MatrixXd realify(const MatrixXcd& c);
/// Real form of the antilinear map z -> C conj(z): [[Re C, Im C], [Im C, -Re C]].
MatrixXd realify_antilinear(const MatrixXcd& c);

/// Splits a real 2n x 2n matrix M into its complex-linear part C1 and
/// antilinear part C2: M = realify(C1) + realify_antilinear(C2).
void complex_parts(const MatrixXd& m, MatrixXcd& c1, MatrixXcd& c2);

/// The symplectic-structure matrix [[0, I], [-I, 0]].
MatrixXd symplectic_j(int n);

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps with a
/// fixed (p,q) ordering; deterministic. Eigenvalues ascending, vectors the
/// matching orthonormal columns.
struct HermitianEigen {
  VectorXd values;
  MatrixXcd vectors;
};
HermitianEigen hermitian_eigen_jacobi(const MatrixXcd& h);

/// Unitary polar factor U of an invertible C: C = U (C*C)^{1/2}.
MatrixXcd polar_unitary(const MatrixXcd& c);

/// Matrix exponential of a skew-Hermitian K (via the Hermitian
/// eigendecomposition of iK); result is unitary.
MatrixXcd exp_skew(const MatrixXcd& k);

/// Skew-Hermitian matrix from its n^2 real parameters: first n entries are
/// the imaginary diagonal, then 2 per strictly-lower entry (re, im).
MatrixXcd skew_from_params(const VectorXd& p, int n);
inline int skew_param_count(int n) { return n * n; }

/// max ||(A*A - I) col|| check helper: operator-norm distance to U(n).
double unitary_defect(const MatrixXcd& a);

}  // namespace hrigid
