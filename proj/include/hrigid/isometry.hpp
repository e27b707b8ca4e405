#pragma once

#include "hrigid/linalg.hpp"
#include "hrigid/sampling.hpp"
#include "hrigid/types.hpp"

namespace hrigid {

/// Gauge isometry in normal form: x -> flip^[reflect]( a * (A z, t) ),
/// i.e. a unitary rotation, then a left translation, then (optionally) the
/// orientation-reversing flip (z,t) -> (conj z, -t) applied last.
/// A is validated unitary to 1e-12 on construction.
struct Isometry {
  MatrixXcd A;
  HPoint a;
  bool reflect = false;

  Isometry() = default;
  Isometry(MatrixXcd A_, HPoint a_, bool reflect_);

  int n() const { return a.n(); }
  static Isometry identity(int n);
  static Isometry translation(const HPoint& b);
  static Isometry rotation(const MatrixXcd& A);

  HPoint apply(const HPoint& x) const;

  /// Constant horizontal differential as a real 2n x 2n matrix: the real
  /// form of A, left-composed with diag(I,-I) when reflect is set.
  MatrixXd dh() const;
  /// Vertical scaling factor: -1 for reflecting isometries, +1 otherwise.
  double lambda() const { return reflect ? -1.0 : 1.0; }
};

/// Composition theta1 after theta2 (apply theta2 first), renormalized.
Isometry compose(const Isometry& t1, const Isometry& t2);
Isometry invert(const Isometry& t);

/// Conjugation by the dilation: delta_s o theta o delta_{1/s}; again an
/// isometry (rotations and the flip commute with dilations).
Isometry conjugate_by_dilation(const Isometry& t, double s);

/// Seeded random isometry; rotation angle scale and translation scale are
/// controlled so small perturbations of the identity can be produced.
Isometry random_isometry(int n, Rng& rng, double rot_scale = 1.0, double trans_scale = 1.0,
                         bool allow_reflect = true);

}  // namespace hrigid
