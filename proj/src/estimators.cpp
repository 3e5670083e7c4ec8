#include "esclab/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace esclab {

namespace {

void check_input(const CostFunction& cost, const DitherSpec& spec,
                 const Vec& theta_hat) {
  if (cost.dim != spec.dim()) {
    throw std::invalid_argument("estimator: cost and dither dimensions differ");
  }
  if (theta_hat.size() != cost.dim) {
    throw std::invalid_argument("estimator: state dimension mismatch");
  }
  if (spec.amplitude <= 0.0) {
    throw std::invalid_argument("estimator: dither amplitude must be positive");
  }
}

}  // namespace

Vec gradient_estimate(const CostFunction& cost, const DitherSpec& spec,
                      const Vec& theta_hat, double tau) {
  check_input(cost, spec, theta_hat);
  const int n = cost.dim;
  const double a = spec.amplitude;
  Vec sines(n);
  Vec probe(n);
  for (int i = 0; i < n; ++i) {
    sines[i] = std::sin(spec.rates[i] * tau);
    probe[i] = theta_hat[i] + a * spec.rel_amplitudes[i] * sines[i];
  }
  const double J = cost.eval(probe);  // the single measurement
  Vec g(n);
  for (int i = 0; i < n; ++i) {
    g[i] = 2.0 / (a * spec.rel_amplitudes[i]) * sines[i] * J;
  }
  return g;
}

Mat hessian_estimate(const CostFunction& cost, const DitherSpec& spec,
                     const Vec& theta_hat, double tau) {
  check_input(cost, spec, theta_hat);
  if (spec.checked_order != RateOrder::Second &&
      !validate_rates(spec.rates, RateOrder::Second).valid) {
    throw std::invalid_argument(
        "hessian estimate requires second-order admissible dither rates");
  }
  const int n = cost.dim;
  const double a = spec.amplitude;
  Vec sines(n);
  Vec probe(n);
  for (int i = 0; i < n; ++i) {
    sines[i] = std::sin(spec.rates[i] * tau);
    probe[i] = theta_hat[i] + a * spec.rel_amplitudes[i] * sines[i];
  }
  const double J = cost.eval(probe);
  Mat H(n, n);
  for (int i = 0; i < n; ++i) {
    const double ri = spec.rel_amplitudes[i];
    H(i, i) = 16.0 / (a * a * ri * ri) * (sines[i] * sines[i] - 0.5) * J;
    for (int j = i + 1; j < n; ++j) {
      const double hij =
          4.0 / (a * a * ri * spec.rel_amplitudes[j]) * sines[i] * sines[j] * J;
      H(i, j) = hij;
      H(j, i) = hij;
    }
  }
  return H;
}

}  // namespace esclab
