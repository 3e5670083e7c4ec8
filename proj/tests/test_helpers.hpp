#pragma once

#include <functional>
#include <random>

#include "esclab/types.hpp"

namespace esclab::testing {

inline Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uni(rng);
  return v;
}

inline Mat random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = uni(rng);
  }
  return 0.5 * (A + A.transpose());
}

inline Mat random_spd(std::mt19937_64& rng, int n, double shift = 0.1) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = uni(rng);
  }
  return A * A.transpose() + shift * Mat::Identity(n, n);
}

// Central-difference gradient, the independent oracle for analytic gradients.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                       double h = 1e-4) {
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

// Periodic trapezoid average oracle; spectrally accurate on smooth periodic
// integrands, independent of averaging::average_rhs.
inline Vec trapezoid_average(const std::function<Vec(double)>& f, double period,
                             int nodes = 1 << 13) {
  Vec acc = f(0.0);
  for (int i = 1; i < nodes; ++i) acc += f(period * i / nodes);
  return acc / nodes;
}

}  // namespace esclab::testing
