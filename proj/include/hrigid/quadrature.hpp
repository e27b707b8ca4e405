#pragma once

#include <functional>
#include <vector>

namespace hrigid {

/// Gauss-Legendre nodes and weights on [-1,1], computed by Newton iteration
/// on the Legendre recurrence; accurate to ~1e-15 for orders used here.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit GaussLegendre(int order);
};

/// Tensor-product integration over the centered coordinate box
/// prod_k [-half[k], half[k]] with the same 1-d order per axis.
/// Calls fn(coords, weight) at every node; coords has half.size() entries.
void tensor_box_quadrature(const std::vector<double>& half, int order,
                           const std::function<void(const std::vector<double>&, double)>& fn);

/// Adaptive Simpson on [a,b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace hrigid
