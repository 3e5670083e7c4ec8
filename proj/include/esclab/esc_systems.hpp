#pragma once

#include <functional>
#include <string>
#include <utility>

#include "esclab/averaging.hpp"
#include "esclab/cost.hpp"
#include "esclab/dither.hpp"
#include "esclab/types.hpp"

namespace esclab {

struct EscParams {
  double k = 1.0;        // adaptation gain
  double omega_l = 1.0;  // Riccati gain (NESC only)
};

enum class EscAlgorithm {
  GescModelFree,
  GescAverage,
  GescModelBased,
  NescModelFree,
  NescAverage,
  NescModelBased,
  NescLogModelFree,
  NescLogAverage,
  NescLogModelBased,
};

/// "gesc", "gesc-average", "gesc-model-based", "nesc", "nesc-average",
/// "nesc-model-based", "nesc-log", "nesc-log-average", "nesc-log-model-based".
EscAlgorithm parse_algorithm(const std::string& name);
std::string algorithm_name(EscAlgorithm algo);
bool is_model_free(EscAlgorithm algo);
bool is_newton(EscAlgorithm algo);
bool is_log_chart(EscAlgorithm algo);
/// The average counterpart of a model-free variant.
EscAlgorithm average_counterpart(EscAlgorithm algo);

// ---- raw right-hand sides ------------------------------------------------

/// d theta/dt = -k g(tau, theta, a); tau = omega*t is supplied by the caller.
Vec gesc_model_free_rhs(double tau, const Vec& theta, const CostFunction& cost,
                        const DitherSpec& spec, const EscParams& params);

/// d theta/dt = -k gbar(theta, a), computed by one-period quadrature.
Vec gesc_average_rhs(const Vec& theta, const CostFunction& cost,
                     const DitherSpec& spec, const EscParams& params,
                     const QuadratureConfig& quad = {});

/// d theta/dt = -k grad J(theta).
Vec gesc_model_based_rhs(const Vec& theta, const CostFunction& cost,
                         const EscParams& params);

/// d theta/dt = -k Gamma g;  d Gamma/dt = omega_l (Gamma - Gamma H Gamma).
/// The Gamma rate is symmetrized before being returned.
std::pair<Vec, Mat> nesc_model_free_rhs(double tau, const Vec& theta,
                                        const Mat& gamma,
                                        const CostFunction& cost,
                                        const DitherSpec& spec,
                                        const EscParams& params);

/// d theta/dt = -k Pi grad J;  d Pi/dt = omega_l (Pi - Pi hess J Pi).
std::pair<Vec, Mat> nesc_model_based_rhs(const Vec& theta, const Mat& pi,
                                         const CostFunction& cost,
                                         const EscParams& params);

/// Log-chart NESC: Gamma is reconstructed as exp_sym(unvech(gamma_vech)), the
/// direct-form rate is evaluated for `variant` (one of the NescLog* tags), and
/// d gamma_vech/dt = log_coordinate_rate(Gamma, dGamma/dt).
std::pair<Vec, Vec> nesc_log_rhs(EscAlgorithm variant, double tau,
                                 const Vec& theta, const Vec& gamma_vech,
                                 const CostFunction& cost,
                                 const DitherSpec& spec,
                                 const EscParams& params,
                                 const QuadratureConfig& quad = {});

// ---- packed first-order systems -------------------------------------------

/// A right-hand side in packed coordinates: x = theta for GESC,
/// x = [theta; vech(Gamma)] for NESC, x = [theta; gamma_vech] for log NESC.
/// Instances may carry scratch buffers; do not share one across threads.
struct OdeSystem {
  int dim = 0;
  std::string description;
  std::function<void(double t, const Vec& x, Vec& dxdt)> rhs;
};

Vec pack_nesc_state(const Vec& theta, const Mat& gamma);
std::pair<Vec, Mat> unpack_nesc_state(const Vec& x, int n);

OdeSystem make_esc_system(EscAlgorithm algo, const CostFunction& cost,
                          const DitherSpec& spec, const EscParams& params,
                          const QuadratureConfig& quad = {});

}  // namespace esclab
