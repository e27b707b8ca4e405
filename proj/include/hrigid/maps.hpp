#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hrigid/isometry.hpp"
#include "hrigid/types.hpp"

namespace hrigid {

/// Smooth map of the group into itself. `jac` (optional) is the full
/// Euclidean Jacobian in coordinates (x_1..x_2n, t): rows are output
/// components, columns input partials.
struct HMap {
  int n = 0;
  std::function<HPoint(const HPoint&)> eval;
  std::function<MatrixXd(const HPoint&)> jac;  // may be empty
  std::string label;

  bool has_jac() const { return static_cast<bool>(jac); }
};

/// Smooth map of the group into C^m. `jac` (optional) holds the complex
/// partials d u_k / d coord_i, shape m x (2n+1).
struct CnMap {
  int n = 0;  // source dimension
  int m = 0;  // number of complex components
  std::function<VectorXcd(const HPoint&)> eval;
  std::function<MatrixXcd(const HPoint&)> jac;  // may be empty
  std::string label;

  bool has_jac() const { return static_cast<bool>(jac); }
};

HMap identity_map(int n);
HMap dilation_map(int n, double s);
HMap isometry_map(const Isometry& t);
/// Right translation x -> x * b (not an isometry of the left-invariant
/// gauge distance in general; used as a contact-condition control).
HMap right_translation_map(const HPoint& b);
/// f after g, with chain-rule Jacobian when both factors carry one.
HMap compose_maps(const HMap& f, const HMap& g);

/// Displacement x^{-1} * f(x) as a point-valued map value.
HPoint displacement(const HMap& f, const HPoint& x);

/// The horizontal components of f as a C^n-valued map (z-part of f(x)).
CnMap horizontal_projection(const HMap& f);
/// The horizontal components of the displacement: z(f(x)) - z(x).
CnMap displacement_projection(const HMap& f);

}  // namespace hrigid
