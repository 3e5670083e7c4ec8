#pragma once

#include <functional>
#include <vector>

#include "esclab/types.hpp"

namespace esclab {

/// Composite-Simpson averaging over one period, with optional doubling
/// refinement until successive estimates differ by less than `tol`.
struct QuadratureConfig {
  int points_per_period = 64;  // subintervals; kept even for Simpson
  double tol = 1e-10;
  int max_doublings = 12;
  bool refine = true;
};

/// Common period of integer-rate sinusoids: 2*pi / gcd(|rates|).
double common_period(const std::vector<int>& rates);

/// One-period average of a tau-periodic field at frozen state x. The
/// summation order is fixed, so results are reproducible bit-for-bit.
/// Throws when refinement has not converged after max_doublings.
Vec average_rhs(const std::function<Vec(double, const Vec&)>& rhs, const Vec& x,
                double period, const QuadratureConfig& cfg = {});

/// The quartic-example residual matrix for rates (1,3): the average gradient
/// estimate is grad J + a^2 A(r1,r2) theta with
///   A = [ 6 r1^2 - 3 r1 r2 + 6 r2^2     3 r1^2 - 3 r1 r2 + 6 r2^2
///        -2 r1^3/r2 + 6 r1^2 + 3 r2^2   -r1^3/r2 + 6 r1^2 + 3 r2^2 ].
/// Serves as the closed-form oracle for the quadrature path.
Mat closed_form_A(double r1, double r2);

/// Componentwise difference between an averaged field value and the
/// model-based one (R_g, R_H, R_f depending on what is passed in).
Vec residual(const Vec& average_value, const Vec& model_based_value);

}  // namespace esclab
