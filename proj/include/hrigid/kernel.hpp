#pragma once

#include "hrigid/maps.hpp"
#include "hrigid/sampling.hpp"

namespace hrigid {

/// An element of the kernel of the overdetermined operator.
/// For n > 1: u(z,t) = a + K z with K skew-Hermitian.
/// For n = 1: u(z,t) = a + i k z + t b + i z^2 conj(b) + i |z|^2 b
/// (a, b complex, k real); the K/a fields hold K = ik and a.
struct KernelElement {
  int n = 1;
  MatrixXcd K;  // skew-Hermitian n x n (i*k for n = 1)
  VectorXcd a;
  cd b = 0.0;       // n = 1 only
  bool special_n1 = false;

  static KernelElement general(const MatrixXcd& K, const VectorXcd& a);
  static KernelElement dim1(cd a, double k, cd b);

  /// As a C^n-valued map with analytic partials.
  CnMap as_map() const;
};

/// Seeded random kernel element (general family for n > 1, full three-term
/// family for n = 1), with coefficient magnitude `scale`.
KernelElement random_kernel_element(int n, Rng& rng, double scale = 1.0);

}  // namespace hrigid
