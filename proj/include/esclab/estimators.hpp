#pragma once

#include "esclab/cost.hpp"
#include "esclab/dither.hpp"
#include "esclab/types.hpp"

namespace esclab {

/// Demodulated instantaneous gradient estimate from a single cost
/// measurement:
///   g_i(tau) = 2/(a r_i) sin(w'_i tau) J(theta + a s(tau)).
Vec gradient_estimate(const CostFunction& cost, const DitherSpec& spec,
                      const Vec& theta_hat, double tau);

/// Element-wise Hessian estimate sharing that same measurement:
///   H_ii = 16/(a^2 r_i^2) (sin^2(w'_i tau) - 1/2) J(theta + a s(tau))
///   H_ij =  4/(a^2 r_i r_j) sin(w'_i tau) sin(w'_j tau) J(theta + a s(tau))
/// Requires a second-order admissible spec; the result is exactly symmetric.
Mat hessian_estimate(const CostFunction& cost, const DitherSpec& spec,
                     const Vec& theta_hat, double tau);

}  // namespace esclab
