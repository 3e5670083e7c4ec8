#pragma once

#include <limits>
#include <string>
#include <vector>

#include "esclab/esc_systems.hpp"
#include "esclab/types.hpp"

namespace esclab {

struct IntegratorConfig {
  double step = 1e-3;
  double t0 = 0.0;
  double t1 = 1.0;
  int record_stride = 1;
  double divergence_norm = 1e12;
};

/// Auto step for model-free systems: at least `steps_per_cycle` RK4 steps per
/// fastest dither cycle, h = 2*pi / (omega * max|w'_i| * steps_per_cycle).
double auto_step(double omega, const std::vector<int>& rates,
                 int steps_per_cycle = 40);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  bool diverged = false;
  double divergence_time = std::numeric_limits<double>::quiet_NaN();
  std::string system;
  IntegratorConfig config;

  int dim() const { return states.empty() ? 0 : static_cast<int>(states.front().size()); }
  std::size_t size() const { return times.size(); }
  const Vec& final_state() const { return states.back(); }
};

/// Classical fixed-step RK4. Records every `record_stride`-th step plus the
/// endpoints. Stops with the divergence flag once the state norm exceeds
/// `divergence_norm` or the step produces a non-finite state. A non-finite
/// right-hand side at an in-range state throws with the offending time.
Trajectory integrate(const OdeSystem& system, const Vec& x0,
                     const IntegratorConfig& cfg);

}  // namespace esclab
