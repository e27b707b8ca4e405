#pragma once

#include <optional>

#include "hrigid/maps.hpp"
#include "hrigid/sampling.hpp"

namespace hrigid {

/// Differentiation scheme for frame derivatives.
struct DiffScheme {
  enum Kind { analytic, flow_fd } kind = analytic;
  double h = 1e-5;           // flow step, scaled by max(1, gauge magnitude at x)
  bool richardson = false;   // combine h and h/2 for a fourth-order estimate
  static DiffScheme fd(double step = 1e-5, bool rich = false) {
    return DiffScheme{flow_fd, step, rich};
  }
};

/// Horizontal differential at a point. M(j,i) = X_i f_j (row = output
/// component, column = frame direction); lambda is the vertical scaling
/// factor, the derivative of the vertical coordinate of f(x)^{-1} f(x*(0,tau)).
struct HorizontalDifferential {
  MatrixXd M;
  double lambda = 0.0;
  HPoint at;
  /// Magnitude of the analytic/flow disagreement when both were computed
  /// (reported, not fatal).
  std::optional<double> fd_mismatch;
};

/// Computes the horizontal differential. `analytic` requires f.jac; flow_fd
/// uses central differences along the frame flows and never needs it.
/// Throws std::invalid_argument if analytic is requested without a Jacobian.
HorizontalDifferential horiz_diff(const HMap& f, const HPoint& x,
                                  const DiffScheme& scheme = DiffScheme{});
/// Uses analytic when f carries a Jacobian, flow_fd otherwise.
HorizontalDifferential horiz_diff_auto(const HMap& f, const HPoint& x);
/// Computes both routes and stores their disagreement in fd_mismatch.
HorizontalDifferential horiz_diff_checked(const HMap& f, const HPoint& x, double h = 1e-5);

/// Horizontal frame derivatives of a C^m-valued map: entry (k,i) = X_i u_k.
MatrixXcd horiz_diff_cn(const CnMap& u, const HPoint& x, const DiffScheme& scheme = DiffScheme{});

/// Value of the overdetermined first-order operator at a point: the
/// symmetric part and the antisymplectic part of the horizontal
/// differential of u, in both real and complex packings.
struct QValue {
  MatrixXd sym_part;           // (M + M^T)/2
  MatrixXd antisymplectic;     // (M + J M J)/2, J = [[0,I],[-I,0]]
  MatrixXcd complex_sym;       // (Zu + (Zu)*)/2
  MatrixXcd complex_antiholo;  // conj-derivative part
  /// Operator norm of the stacked [sym; antisymplectic] block matrix.
  double norm() const;
};

QValue q_apply(const CnMap& u, const HPoint& x, const DiffScheme& scheme = DiffScheme{});
/// Q applied to a precomputed horizontal differential (of an R^{2n}-valued map).
QValue q_of_matrix(const MatrixXd& m);

/// Residual of the pointwise distortion estimate for a map with
/// quasi-isometry constant L: bound(L, |D_h f - I|) - |Q(displacement)|,
/// nonnegative when the estimate holds at x. Throws std::domain_error when
/// the vertical factor lambda is <= 0 at x (orientation hypothesis).
double main_estimate_residual(const HMap& f, const HPoint& x, double L,
                              const DiffScheme& scheme = DiffScheme{});

/// Max over horizontal directions i of |X_i f_t - 2 sum_j (f_{j+n} X_i f_j -
/// f_j X_i f_{j+n})|; zero iff f respects the horizontal bundle at x.
double contact_residual(const HMap& f, const HPoint& x, const DiffScheme& scheme = DiffScheme{});

/// Empirical two-sided horizontal distortion over a ball: max over samples
/// of max(sigma_max(M), 1/sigma_min(M)), plus a constant-orientation check.
struct QiProbe {
  double L_lower = 1.0;
  bool sign_ok = true;
  double lambda_sign = 1.0;
};
QiProbe qi_probe(const HMap& f, const Ball& region, int samples = 128,
                 const DiffScheme& scheme = DiffScheme{});

/// Empirical metric distortion bounds: extreme ratios of gauge distances of
/// image pairs to source pairs over random pairs in a ball.
struct BilipschitzProbe {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};
BilipschitzProbe bilipschitz_probe(const HMap& f, const Ball& region, int pairs,
                                   std::uint64_t seed);

}  // namespace hrigid
