#include "esclab/cost.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace esclab {

namespace {

// Golden-section search for the minimum of f on [lo, hi].
template <typename F>
double golden_min(const F& f, double lo, double hi, int iters = 90) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return f((lo + hi) / 2.0);
}

Vec unit2(double t) {
  Vec x(2);
  x << std::cos(t), std::sin(t);
  return x;
}

}  // namespace

CostFunction quartic2d() {
  CostFunction c;
  c.id = "quartic2d";
  c.dim = 2;
  c.eval = [](const Vec& th) {
    const double u = th[0] + th[1];
    return th[0] * th[0] * th[0] * th[0] + u * u * u * u;
  };
  c.grad = [](const Vec& th) {
    const double u = th[0] + th[1];
    Vec g(2);
    g << 4.0 * th[0] * th[0] * th[0] + 4.0 * u * u * u, 4.0 * u * u * u;
    return g;
  };
  c.hess = [](const Vec& th) {
    const double u = th[0] + th[1];
    const double uu = 12.0 * u * u;
    Mat h(2, 2);
    h << 12.0 * th[0] * th[0] + uu, uu, uu, uu;
    return h;
  };
  c.minimizer = Vec::Zero(2);
  c.homogeneous_degree = 4;
  return c;
}

CostFunction quadratic_cost(const Mat& Q) {
  if (Q.rows() != Q.cols() || Q.rows() < 1) {
    throw std::invalid_argument("quadratic cost: Q must be square");
  }
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("quadratic cost: Q must be symmetric");
  }
  Eigen::LLT<Mat> llt(Q);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("quadratic cost: Q must be positive definite");
  }
  const int n = static_cast<int>(Q.rows());
  CostFunction c;
  c.id = "quadratic";
  c.dim = n;
  c.eval = [Q](const Vec& th) { return 0.5 * th.dot(Q * th); };
  c.grad = [Q](const Vec& th) -> Vec { return Q * th; };
  c.hess = [Q](const Vec&) { return Q; };
  c.minimizer = Vec::Zero(n);
  c.homogeneous_degree = 2;
  return c;
}

CostFunction sphere_cost(int n) {
  if (n < 1) throw std::invalid_argument("sphere cost: n must be positive");
  CostFunction c;
  c.id = "sphere";
  c.dim = n;
  c.eval = [](const Vec& th) { return th.squaredNorm(); };
  c.grad = [](const Vec& th) -> Vec { return 2.0 * th; };
  c.hess = [n](const Vec&) -> Mat { return 2.0 * Mat::Identity(n, n); };
  c.minimizer = Vec::Zero(n);
  c.homogeneous_degree = 2;
  return c;
}

CostFunction builtin_cost(const std::string& id, const std::optional<Mat>& Q,
                          int n) {
  if (id == "quartic2d") return quartic2d();
  if (id == "sphere") return sphere_cost(n);
  if (id == "quadratic") {
    if (!Q) throw std::invalid_argument("quadratic cost requires a Q matrix");
    return quadratic_cost(*Q);
  }
  throw std::invalid_argument("unknown cost id: " + id);
}

GrowthBounds growth_bounds(const CostFunction& cost) {
  if (!cost.homogeneous_degree) {
    throw std::invalid_argument(
        "growth bounds require a homogeneous cost with a declared degree");
  }
  if (cost.dim == 1) {
    Vec p(1);
    p << 1.0;
    const double a = cost.eval(p);
    p << -1.0;
    const double b = cost.eval(p);
    return {std::min(a, b), std::max(a, b)};
  }
  if (cost.dim == 2) {
    const auto f = [&](double t) { return cost.eval(unit2(t)); };
    const int N = 20000;
    const double two_pi = 2.0 * std::numbers::pi;
    int imin = 0, imax = 0;
    double vmin = f(0.0), vmax = vmin;
    for (int i = 1; i < N; ++i) {
      const double v = f(two_pi * i / N);
      if (v < vmin) {
        vmin = v;
        imin = i;
      }
      if (v > vmax) {
        vmax = v;
        imax = i;
      }
    }
    const double h = two_pi / N;
    const double b1 =
        golden_min(f, two_pi * imin / N - h, two_pi * imin / N + h);
    const double b2 = -golden_min([&](double t) { return -f(t); },
                                  two_pi * imax / N - h, two_pi * imax / N + h);
    return {b1, b2};
  }
  // n >= 3: seeded deterministic sphere sampling with great-circle
  // golden-section refinement through each coordinate plane.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec best_min, best_max;
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -vmin;
  for (int i = 0; i < 20000; ++i) {
    Vec x(cost.dim);
    for (int j = 0; j < cost.dim; ++j) x[j] = gauss(rng);
    x.normalize();
    const double v = cost.eval(x);
    if (v < vmin) {
      vmin = v;
      best_min = x;
    }
    if (v > vmax) {
      vmax = v;
      best_max = x;
    }
  }
  const auto refine = [&](Vec x, double sign) {
    for (int sweep = 0; sweep < 8; ++sweep) {
      for (int i = 0; i < cost.dim; ++i) {
        for (int j = i + 1; j < cost.dim; ++j) {
          const Vec base = x;
          const auto rot = [&](double t) {
            Vec y = base;
            const double ci = base[i], cj = base[j];
            y[i] = ci * std::cos(t) - cj * std::sin(t);
            y[j] = ci * std::sin(t) + cj * std::cos(t);
            return sign * cost.eval(y);
          };
          double lo = -0.3, hi = 0.3;
          const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
          double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
          double fc = rot(c), fd = rot(d);
          for (int it = 0; it < 70; ++it) {
            if (fc < fd) {
              hi = d;
              d = c;
              fd = fc;
              c = hi - inv_phi * (hi - lo);
              fc = rot(c);
            } else {
              lo = c;
              c = d;
              fc = fd;
              d = lo + inv_phi * (hi - lo);
              fd = rot(d);
            }
          }
          const double t = (lo + hi) / 2.0;
          const double ci = x[i], cj = x[j];
          x[i] = ci * std::cos(t) - cj * std::sin(t);
          x[j] = ci * std::sin(t) + cj * std::cos(t);
        }
      }
    }
    return cost.eval(x);
  };
  return {refine(best_min, +1.0), refine(best_max, -1.0)};
}

double ultimate_bound_gain(const GrowthBounds& gb, double a) {
  if (gb.b1 <= 0.0 || gb.b2 < gb.b1) {
    throw std::invalid_argument("ultimate bound gain: need 0 < b1 <= b2");
  }
  return 3.0 * std::pow(gb.b1, -0.75) * std::pow(gb.b2, 0.25) * a;
}

}  // namespace esclab
