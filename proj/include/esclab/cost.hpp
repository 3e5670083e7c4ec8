#pragma once

#include <functional>
#include <optional>
#include <string>

#include "esclab/types.hpp"

namespace esclab {

/// Scalar field J : R^n -> R with optional analytic derivative oracles.
/// `homogeneous_degree` is declared metadata; growth_bounds requires it.
struct CostFunction {
  std::string id;
  int dim = 0;
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;  // empty when no analytic gradient
  std::function<Mat(const Vec&)> hess;  // empty when no analytic Hessian
  std::optional<Vec> minimizer;
  std::optional<int> homogeneous_degree;

  bool has_grad() const { return static_cast<bool>(grad); }
  bool has_hess() const { return static_cast<bool>(hess); }

  double operator()(const Vec& theta) const { return eval(theta); }
};

/// b1 ||theta||^d <= J(theta) <= b2 ||theta||^d for homogeneous J of degree d.
struct GrowthBounds {
  double b1 = 0.0;
  double b2 = 0.0;
};

/// J(theta) = theta1^4 + (theta1 + theta2)^4; minimizer at the origin.
CostFunction quartic2d();

/// J(theta) = 1/2 theta' Q theta for symmetric positive definite Q.
CostFunction quadratic_cost(const Mat& Q);

/// J(theta) = ||theta||^2.
CostFunction sphere_cost(int n);

/// Lookup by string id: "quartic2d", "sphere" (needs n), "quadratic" (needs Q).
CostFunction builtin_cost(const std::string& id,
                          const std::optional<Mat>& Q = std::nullopt,
                          int n = 2);

/// Min/max of J over the unit sphere by dense angular grid plus
/// golden-section refinement. Deterministic; errors on costs without a
/// declared homogeneity degree.
GrowthBounds growth_bounds(const CostFunction& cost);

/// gamma(a) = 3 b1^{-3/4} b2^{1/4} a, the dither-amplitude gain bounding the
/// ultimate offset of the quartic average system.
double ultimate_bound_gain(const GrowthBounds& gb, double a);

}  // namespace esclab
