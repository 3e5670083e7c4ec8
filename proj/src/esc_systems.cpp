#include "esclab/esc_systems.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "esclab/estimators.hpp"
#include "esclab/matrix_calculus.hpp"

namespace esclab {

EscAlgorithm parse_algorithm(const std::string& name) {
  if (name == "gesc") return EscAlgorithm::GescModelFree;
  if (name == "gesc-average") return EscAlgorithm::GescAverage;
  if (name == "gesc-model-based") return EscAlgorithm::GescModelBased;
  if (name == "nesc") return EscAlgorithm::NescModelFree;
  if (name == "nesc-average") return EscAlgorithm::NescAverage;
  if (name == "nesc-model-based") return EscAlgorithm::NescModelBased;
  if (name == "nesc-log") return EscAlgorithm::NescLogModelFree;
  if (name == "nesc-log-average") return EscAlgorithm::NescLogAverage;
  if (name == "nesc-log-model-based") return EscAlgorithm::NescLogModelBased;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algorithm_name(EscAlgorithm algo) {
  switch (algo) {
    case EscAlgorithm::GescModelFree: return "gesc";
    case EscAlgorithm::GescAverage: return "gesc-average";
    case EscAlgorithm::GescModelBased: return "gesc-model-based";
    case EscAlgorithm::NescModelFree: return "nesc";
    case EscAlgorithm::NescAverage: return "nesc-average";
    case EscAlgorithm::NescModelBased: return "nesc-model-based";
    case EscAlgorithm::NescLogModelFree: return "nesc-log";
    case EscAlgorithm::NescLogAverage: return "nesc-log-average";
    case EscAlgorithm::NescLogModelBased: return "nesc-log-model-based";
  }
  return "?";
}

bool is_model_free(EscAlgorithm algo) {
  return algo == EscAlgorithm::GescModelFree ||
         algo == EscAlgorithm::NescModelFree ||
         algo == EscAlgorithm::NescLogModelFree;
}

bool is_newton(EscAlgorithm algo) {
  return algo != EscAlgorithm::GescModelFree &&
         algo != EscAlgorithm::GescAverage &&
         algo != EscAlgorithm::GescModelBased;
}

bool is_log_chart(EscAlgorithm algo) {
  return algo == EscAlgorithm::NescLogModelFree ||
         algo == EscAlgorithm::NescLogAverage ||
         algo == EscAlgorithm::NescLogModelBased;
}

EscAlgorithm average_counterpart(EscAlgorithm algo) {
  switch (algo) {
    case EscAlgorithm::GescModelFree: return EscAlgorithm::GescAverage;
    case EscAlgorithm::NescModelFree: return EscAlgorithm::NescAverage;
    case EscAlgorithm::NescLogModelFree: return EscAlgorithm::NescLogAverage;
    default:
      throw std::invalid_argument("average counterpart is defined for model-free variants");
  }
}

// ---- raw right-hand sides --------------------------------------------------

Vec gesc_model_free_rhs(double tau, const Vec& theta, const CostFunction& cost,
                        const DitherSpec& spec, const EscParams& params) {
  return -params.k * gradient_estimate(cost, spec, theta, tau);
}

Vec gesc_average_rhs(const Vec& theta, const CostFunction& cost,
                     const DitherSpec& spec, const EscParams& params,
                     const QuadratureConfig& quad) {
  const double period = common_period(spec.rates);
  return average_rhs(
      [&](double tau, const Vec& x) {
        return gesc_model_free_rhs(tau, x, cost, spec, params);
      },
      theta, period, quad);
}

Vec gesc_model_based_rhs(const Vec& theta, const CostFunction& cost,
                         const EscParams& params) {
  if (!cost.has_grad()) {
    throw std::invalid_argument("model-based GESC requires a gradient oracle");
  }
  return -params.k * cost.grad(theta);
}

namespace {

void require_spd(const Mat& gamma, const char* who) {
  if (!gamma.allFinite()) {
    throw std::runtime_error(std::string(who) + ": matrix is not finite");
  }
  Eigen::LLT<Mat> llt(gamma);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string(who) + ": matrix is not positive definite");
  }
}

std::pair<Vec, Mat> riccati_pair(const Vec& g, const Mat& H, const Mat& gamma,
                                 const EscParams& params) {
  Vec dtheta = -params.k * (gamma * g);
  Mat dgamma = params.omega_l * (gamma - gamma * H * gamma);
  dgamma = symmetric_part(dgamma);
  return {std::move(dtheta), std::move(dgamma)};
}

}  // namespace

std::pair<Vec, Mat> nesc_model_free_rhs(double tau, const Vec& theta,
                                        const Mat& gamma,
                                        const CostFunction& cost,
                                        const DitherSpec& spec,
                                        const EscParams& params) {
  require_spd(gamma, "nesc_model_free_rhs");
  const Vec g = gradient_estimate(cost, spec, theta, tau);
  const Mat H = hessian_estimate(cost, spec, theta, tau);
  return riccati_pair(g, H, gamma, params);
}

std::pair<Vec, Mat> nesc_model_based_rhs(const Vec& theta, const Mat& pi,
                                         const CostFunction& cost,
                                         const EscParams& params) {
  if (!cost.has_grad() || !cost.has_hess()) {
    throw std::invalid_argument("model-based NESC requires gradient and Hessian oracles");
  }
  require_spd(pi, "nesc_model_based_rhs");
  return riccati_pair(cost.grad(theta), cost.hess(theta), pi, params);
}

namespace {

std::pair<Vec, Mat> nesc_direct_rhs_for(EscAlgorithm direct, double tau,
                                        const Vec& theta, const Mat& gamma,
                                        const CostFunction& cost,
                                        const DitherSpec& spec,
                                        const EscParams& params,
                                        const QuadratureConfig& quad) {
  switch (direct) {
    case EscAlgorithm::NescModelFree:
      return nesc_model_free_rhs(tau, theta, gamma, cost, spec, params);
    case EscAlgorithm::NescModelBased:
      return nesc_model_based_rhs(theta, gamma, cost, params);
    case EscAlgorithm::NescAverage: {
      const double period = common_period(spec.rates);
      const int n = cost.dim;
      const Vec packed = pack_nesc_state(theta, gamma);
      const Vec avg = average_rhs(
          [&](double t, const Vec& x) {
            auto [th, gm] = unpack_nesc_state(x, n);
            auto [dth, dgm] = nesc_model_free_rhs(t, th, gm, cost, spec, params);
            return pack_nesc_state(dth, dgm);
          },
          packed, period, quad);
      auto [dth, dgm] = unpack_nesc_state(avg, n);
      return {dth, dgm};
    }
    default:
      throw std::invalid_argument("nesc_direct_rhs_for: not a direct NESC variant");
  }
}

}  // namespace

std::pair<Vec, Vec> nesc_log_rhs(EscAlgorithm variant, double tau,
                                 const Vec& theta, const Vec& gamma_vech,
                                 const CostFunction& cost,
                                 const DitherSpec& spec,
                                 const EscParams& params,
                                 const QuadratureConfig& quad) {
  EscAlgorithm direct;
  switch (variant) {
    case EscAlgorithm::NescLogModelFree: direct = EscAlgorithm::NescModelFree; break;
    case EscAlgorithm::NescLogAverage: direct = EscAlgorithm::NescAverage; break;
    case EscAlgorithm::NescLogModelBased: direct = EscAlgorithm::NescModelBased; break;
    default:
      throw std::invalid_argument("nesc_log_rhs: not a log-chart variant");
  }
  const Mat gamma = exp_sym(unvech(gamma_vech));
  if (!gamma.allFinite()) {
    throw std::runtime_error(
        "nesc_log_rhs: inverse-Hessian reconstruction overflowed; the "
        "log-coordinate state left the representable range");
  }
  auto [dtheta, dgamma] =
      nesc_direct_rhs_for(direct, tau, theta, gamma, cost, spec, params, quad);
  return {std::move(dtheta), log_coordinate_rate(gamma, dgamma)};
}

// ---- packed systems ---------------------------------------------------------

Vec pack_nesc_state(const Vec& theta, const Mat& gamma) {
  const Vec v = vech(gamma, 1e-9);
  Vec x(theta.size() + v.size());
  x << theta, v;
  return x;
}

std::pair<Vec, Mat> unpack_nesc_state(const Vec& x, int n) {
  const Vec theta = x.head(n);
  const Mat gamma = unvech(x.tail(x.size() - n));
  return {theta, gamma};
}

namespace {

OdeSystem make_gesc_model_free(const CostFunction& cost, const DitherSpec& spec,
                               const EscParams& params) {
  OdeSystem sys;
  sys.dim = cost.dim;
  sys.description = "gesc model-free";
  const double omega = spec.base_frequency;
  sys.rhs = [cost, spec, params, omega, probe = Vec(cost.dim)](
                double t, const Vec& x, Vec& dxdt) mutable {
    const double tau = omega * t;
    const double a = spec.amplitude;
    const int n = static_cast<int>(x.size());
    double J;
    for (int i = 0; i < n; ++i) {
      probe[i] = x[i] + a * spec.rel_amplitudes[i] * std::sin(spec.rates[i] * tau);
    }
    J = cost.eval(probe);
    for (int i = 0; i < n; ++i) {
      dxdt[i] = -params.k * 2.0 / (a * spec.rel_amplitudes[i]) *
                std::sin(spec.rates[i] * tau) * J;
    }
  };
  return sys;
}

// Specialized quadrature loop; matches averaging::average_rhs node order and
// weights exactly, with scratch reuse to keep sweep integrations cheap.
OdeSystem make_gesc_average(const CostFunction& cost, const DitherSpec& spec,
                            const EscParams& params,
                            const QuadratureConfig& quad) {
  OdeSystem sys;
  sys.dim = cost.dim;
  sys.description = "gesc average";
  const double period = common_period(spec.rates);
  sys.rhs = [cost, spec, params, quad, period, probe = Vec(cost.dim),
             acc = Vec(cost.dim), prev = Vec(cost.dim), node = Vec(cost.dim)](
                double, const Vec& x, Vec& dxdt) mutable {
    const double a = spec.amplitude;
    const int n = static_cast<int>(x.size());
    const auto eval_node = [&](double tau) {
      for (int i = 0; i < n; ++i) {
        probe[i] = x[i] + a * spec.rel_amplitudes[i] * std::sin(spec.rates[i] * tau);
      }
      const double J = cost.eval(probe);
      for (int i = 0; i < n; ++i) {
        node[i] = -params.k * 2.0 / (a * spec.rel_amplitudes[i]) *
                  std::sin(spec.rates[i] * tau) * J;
      }
    };
    double abs_scale = 0.0;
    const auto simpson = [&](int N, Vec& out) {
      const double h = period / N;
      eval_node(0.0);
      out = node;
      double abs_acc = node.cwiseAbs().maxCoeff();
      for (int i = 1; i < N; ++i) {
        eval_node(i * h);
        const double w = (i % 2 == 1) ? 4.0 : 2.0;
        out += w * node;
        abs_acc += w * node.cwiseAbs().maxCoeff();
      }
      eval_node(period);
      out += node;
      abs_acc += node.cwiseAbs().maxCoeff();
      out *= h / 3.0;
      abs_scale = abs_acc * (h / 3.0);
    };
    int N = std::max(2, quad.points_per_period);
    if (N % 2 != 0) ++N;
    simpson(N, prev);
    if (!quad.refine) {
      dxdt = prev / period;
      return;
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int d = 0; d < quad.max_doublings; ++d) {
      N *= 2;
      simpson(N, acc);
      const double stop =
          quad.tol * std::max(period, acc.cwiseAbs().maxCoeff() * period) +
          64.0 * eps * abs_scale;
      if ((acc - prev).cwiseAbs().maxCoeff() < stop) {
        dxdt = acc / period;
        return;
      }
      prev = acc;
    }
    throw std::runtime_error("gesc average rhs: quadrature did not converge");
  };
  return sys;
}

}  // namespace

OdeSystem make_esc_system(EscAlgorithm algo, const CostFunction& cost,
                          const DitherSpec& spec, const EscParams& params,
                          const QuadratureConfig& quad) {
  const int n = cost.dim;
  if (spec.dim() != n && !(algo == EscAlgorithm::GescModelBased ||
                           algo == EscAlgorithm::NescModelBased ||
                           algo == EscAlgorithm::NescLogModelBased)) {
    throw std::invalid_argument("make_esc_system: cost and dither dimensions differ");
  }
  const int m = n + n * (n + 1) / 2;
  switch (algo) {
    case EscAlgorithm::GescModelFree:
      return make_gesc_model_free(cost, spec, params);
    case EscAlgorithm::GescAverage:
      return make_gesc_average(cost, spec, params, quad);
    case EscAlgorithm::GescModelBased: {
      OdeSystem sys;
      sys.dim = n;
      sys.description = "gesc model-based";
      sys.rhs = [cost, params](double, const Vec& x, Vec& dxdt) {
        dxdt = gesc_model_based_rhs(x, cost, params);
      };
      return sys;
    }
    case EscAlgorithm::NescModelFree:
    case EscAlgorithm::NescAverage:
    case EscAlgorithm::NescModelBased: {
      OdeSystem sys;
      sys.dim = m;
      sys.description = algorithm_name(algo);
      const double omega = spec.base_frequency;
      sys.rhs = [algo, cost, spec, params, quad, omega, n](
                    double t, const Vec& x, Vec& dxdt) {
        auto [theta, gamma] = unpack_nesc_state(x, n);
        const double tau = omega * t;
        auto [dth, dgm] = nesc_direct_rhs_for(
            algo == EscAlgorithm::NescAverage ? EscAlgorithm::NescAverage
            : algo == EscAlgorithm::NescModelFree ? EscAlgorithm::NescModelFree
                                                  : EscAlgorithm::NescModelBased,
            tau, theta, gamma, cost, spec, params, quad);
        dxdt = pack_nesc_state(dth, dgm);
      };
      return sys;
    }
    case EscAlgorithm::NescLogModelFree:
    case EscAlgorithm::NescLogAverage:
    case EscAlgorithm::NescLogModelBased: {
      OdeSystem sys;
      sys.dim = m;
      sys.description = algorithm_name(algo);
      const double omega = spec.base_frequency;
      sys.rhs = [algo, cost, spec, params, quad, omega, n](
                    double t, const Vec& x, Vec& dxdt) {
        const Vec theta = x.head(n);
        const Vec gamma_vech = x.tail(x.size() - n);
        auto [dth, dgm] = nesc_log_rhs(algo, omega * t, theta, gamma_vech, cost,
                                       spec, params, quad);
        dxdt.head(n) = dth;
        dxdt.tail(x.size() - n) = dgm;
      };
      return sys;
    }
  }
  throw std::invalid_argument("make_esc_system: unknown algorithm");
}

}  // namespace esclab
