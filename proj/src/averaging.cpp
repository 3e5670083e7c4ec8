#include "esclab/averaging.hpp"

#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace esclab {

double common_period(const std::vector<int>& rates) {
  if (rates.empty()) throw std::invalid_argument("common_period: empty rates");
  int g = 0;
  for (int r : rates) {
    if (r == 0) throw std::invalid_argument("common_period: zero rate");
    g = std::gcd(g, std::abs(r));
  }
  return 2.0 * std::numbers::pi / g;
}

namespace {

// Composite Simpson with N (even) subintervals, summed left to right.
// `abs_integral` receives the same rule applied to |f|, the scale used to
// keep the refinement stop below the roundoff floor of the summation.
Vec simpson(const std::function<Vec(double, const Vec&)>& rhs, const Vec& x,
            double period, int N, double& abs_integral) {
  const double h = period / N;
  Vec acc = rhs(0.0, x);
  double abs_acc = acc.cwiseAbs().maxCoeff();
  for (int i = 1; i < N; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    const Vec f = rhs(i * h, x);
    acc += w * f;
    abs_acc += w * f.cwiseAbs().maxCoeff();
  }
  const Vec f = rhs(period, x);
  acc += f;
  abs_acc += f.cwiseAbs().maxCoeff();
  abs_integral = abs_acc * (h / 3.0);
  return acc * (h / 3.0);
}

}  // namespace

Vec average_rhs(const std::function<Vec(double, const Vec&)>& rhs, const Vec& x,
                double period, const QuadratureConfig& cfg) {
  if (period <= 0.0) throw std::invalid_argument("average_rhs: period must be positive");
  int N = cfg.points_per_period;
  if (N < 2) N = 2;
  if (N % 2 != 0) ++N;  // Simpson needs an even subinterval count
  double abs_scale = 0.0;
  Vec prev = simpson(rhs, x, period, N, abs_scale);
  if (!cfg.refine) return prev / period;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int d = 0; d < cfg.max_doublings; ++d) {
    N *= 2;
    Vec next = simpson(rhs, x, period, N, abs_scale);
    const double stop =
        cfg.tol * std::max(period, next.cwiseAbs().maxCoeff() * period) +
        64.0 * eps * abs_scale;
    if ((next - prev).cwiseAbs().maxCoeff() < stop) {
      return next / period;
    }
    prev = std::move(next);
  }
  throw std::runtime_error(
      "average_rhs: quadrature refinement did not converge after " +
      std::to_string(cfg.max_doublings) + " doublings");
}

Mat closed_form_A(double r1, double r2) {
  if (r2 == 0.0) throw std::invalid_argument("closed_form_A: r2 must be nonzero");
  if (std::abs(r1 * r1 + r2 * r2 - 1.0) > 1e-9) {
    throw std::invalid_argument("closed_form_A: amplitudes must be normalized");
  }
  Mat A(2, 2);
  A(0, 0) = 6.0 * r1 * r1 - 3.0 * r1 * r2 + 6.0 * r2 * r2;
  A(0, 1) = 3.0 * r1 * r1 - 3.0 * r1 * r2 + 6.0 * r2 * r2;
  A(1, 0) = -2.0 * r1 * r1 * r1 / r2 + 6.0 * r1 * r1 + 3.0 * r2 * r2;
  A(1, 1) = -r1 * r1 * r1 / r2 + 6.0 * r1 * r1 + 3.0 * r2 * r2;
  return A;
}

Vec residual(const Vec& average_value, const Vec& model_based_value) {
  if (average_value.size() != model_based_value.size()) {
    throw std::invalid_argument("residual: dimension mismatch");
  }
  return average_value - model_based_value;
}

}  // namespace esclab
