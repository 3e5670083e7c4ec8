#include "esclab/integrate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace esclab {

double auto_step(double omega, const std::vector<int>& rates,
                 int steps_per_cycle) {
  if (omega <= 0.0) throw std::invalid_argument("auto_step: omega must be positive");
  int max_rate = 0;
  for (int r : rates) max_rate = std::max(max_rate, std::abs(r));
  if (max_rate == 0) throw std::invalid_argument("auto_step: empty or zero rates");
  return 2.0 * std::numbers::pi / (omega * max_rate * steps_per_cycle);
}

Trajectory integrate(const OdeSystem& system, const Vec& x0,
                     const IntegratorConfig& cfg) {
  if (cfg.step <= 0.0) throw std::invalid_argument("integrate: step must be positive");
  if (cfg.t1 <= cfg.t0) throw std::invalid_argument("integrate: empty time span");
  if (!x0.allFinite()) throw std::invalid_argument("integrate: non-finite initial state");
  if (x0.size() != system.dim) {
    throw std::invalid_argument("integrate: state dimension mismatch");
  }

  const long long n_steps =
      static_cast<long long>(std::ceil((cfg.t1 - cfg.t0) / cfg.step - 1e-9));
  const int stride = std::max(1, cfg.record_stride);

  Trajectory traj;
  traj.system = system.description;
  traj.config = cfg;
  traj.times.reserve(static_cast<std::size_t>(n_steps / stride) + 2);
  traj.states.reserve(static_cast<std::size_t>(n_steps / stride) + 2);

  Vec x = x0;
  Vec k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), xt(x.size());
  double t = cfg.t0;
  traj.times.push_back(t);
  traj.states.push_back(x);

  // A non-finite rhs at a finite, in-range state is a defect in the system
  // and raises; a non-finite rhs reached through an overflowing stage state
  // is part of a divergence and sets the flag instead.
  bool stage_diverged = false;
  const auto stage = [&](double ts, const Vec& xs, Vec& k) {
    system.rhs(ts, xs, k);
    if (!k.allFinite()) {
      if (xs.allFinite() && xs.norm() <= cfg.divergence_norm) {
        throw std::runtime_error("integrate: non-finite right-hand side at t=" +
                                 std::to_string(ts));
      }
      stage_diverged = true;
    }
  };

  for (long long i = 0; i < n_steps; ++i) {
    const double h = std::min(cfg.step, cfg.t1 - t);
    stage(t, x, k1);
    if (!stage_diverged) {
      xt = x + (0.5 * h) * k1;
      stage(t + 0.5 * h, xt, k2);
    }
    if (!stage_diverged) {
      xt = x + (0.5 * h) * k2;
      stage(t + 0.5 * h, xt, k3);
    }
    if (!stage_diverged) {
      xt = x + h * k3;
      stage(t + h, xt, k4);
    }
    if (stage_diverged) {
      traj.diverged = true;
      traj.divergence_time = t;
      break;
    }
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = cfg.t0 + (i + 1) * cfg.step;
    if (t > cfg.t1) t = cfg.t1;

    const bool finite = x.allFinite();
    if (!finite || x.norm() > cfg.divergence_norm) {
      traj.diverged = true;
      traj.divergence_time = t;
      if (finite) {
        traj.times.push_back(t);
        traj.states.push_back(x);
      }
      break;
    }
    if ((i + 1) % stride == 0 || i == n_steps - 1) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  }
  return traj;
}

}  // namespace esclab
