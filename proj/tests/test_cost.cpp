#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "esclab/cost.hpp"
#include "test_helpers.hpp"

using namespace esclab;
using esclab::testing::fd_gradient;
using esclab::testing::random_spd;
using esclab::testing::random_vec;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Independent 1-D oracle for the quartic growth bounds: extremize
// cos^4 t + (cos t + sin t)^4 over one period with a fine grid and
// golden-section refinement.
double quartic_circle(double t) {
  const double c = std::cos(t), s = std::sin(t);
  return c * c * c * c + (c + s) * (c + s) * (c + s) * (c + s);
}

double golden_extreme(double lo, double hi, double sign) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
  double fc = sign * quartic_circle(c), fd = sign * quartic_circle(d);
  for (int i = 0; i < 90; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = sign * quartic_circle(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = sign * quartic_circle(d);
    }
  }
  return quartic_circle((lo + hi) / 2.0);
}

GrowthBounds oracle_quartic_bounds() {
  const int N = 100000;
  const double two_pi = 2.0 * std::numbers::pi;
  double vmin = 1e300, vmax = -1e300;
  int imin = 0, imax = 0;
  for (int i = 0; i < N; ++i) {
    const double v = quartic_circle(two_pi * i / N);
    if (v < vmin) { vmin = v; imin = i; }
    if (v > vmax) { vmax = v; imax = i; }
  }
  const double h = two_pi / N;
  return {golden_extreme(two_pi * imin / N - h, two_pi * imin / N + h, +1.0),
          golden_extreme(two_pi * imax / N - h, two_pi * imax / N + h, -1.0)};
}

}  // namespace

TEST_SUITE("cost") {

TEST_CASE("quartic2d point values") {
  const auto cost = quartic2d();
  CHECK(cost.dim == 2);
  CHECK(cost.eval(v2(0, 0)) == 0.0);
  CHECK(cost.eval(v2(1, 1)) == 17.0);  // 1 + 2^4
  const Vec g = cost.grad(v2(1, 0));
  CHECK(g[0] == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(4.0).epsilon(1e-14));
  const Mat H = cost.hess(v2(1, 0));
  CHECK(H(0, 0) == doctest::Approx(24.0));
  CHECK(H(0, 1) == doctest::Approx(12.0));
  CHECK(H(1, 1) == doctest::Approx(12.0));
  REQUIRE(cost.minimizer.has_value());
  CHECK(cost.grad(*cost.minimizer).norm() <= 1e-10);
}

TEST_CASE("gradient oracles match central differences") {
  std::mt19937_64 rng(101);
  std::vector<CostFunction> corpus;
  corpus.push_back(quartic2d());
  corpus.push_back(quadratic_cost(random_spd(rng, 3)));
  corpus.push_back(sphere_cost(4));
  for (const auto& cost : corpus) {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = random_vec(rng, cost.dim, 2.0);
      worst = std::max(worst, (cost.grad(x) - fd_gradient(cost.eval, x)).norm());
    }
    CAPTURE(cost.id);
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("hessian oracles are symmetric; quadratic hessian is Q exactly") {
  std::mt19937_64 rng(102);
  const Mat Q = random_spd(rng, 4);
  const auto cost = quadratic_cost(Q);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = random_vec(rng, 4, 3.0);
    const Mat H = cost.hess(x);
    CHECK((H - Q).cwiseAbs().maxCoeff() == 0.0);
  }
  const auto q4 = quartic2d();
  const Mat H = q4.hess(v2(0.3, -1.2));
  CHECK(H(0, 1) == H(1, 0));
}

TEST_CASE("builtin lookup and rejection paths") {
  CHECK(builtin_cost("quartic2d").id == "quartic2d");
  CHECK(builtin_cost("sphere", std::nullopt, 3).dim == 3);
  Mat Q(2, 2);
  Q << 2, 0, 0, 1;
  CHECK(builtin_cost("quadratic", Q).dim == 2);
  CHECK_THROWS_AS(builtin_cost("mystery"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_cost("quadratic"), std::invalid_argument);
  Mat bad(2, 2);
  bad << 1, 2, 2, 1;  // indefinite
  CHECK_THROWS_AS(quadratic_cost(bad), std::invalid_argument);
  Mat asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(quadratic_cost(asym), std::invalid_argument);
}

TEST_CASE("growth bounds on costs constant over the sphere") {
  const auto gb_sphere = growth_bounds(sphere_cost(2));
  CHECK(gb_sphere.b1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(gb_sphere.b2 == doctest::Approx(1.0).epsilon(1e-10));
  const auto gb_quad = growth_bounds(quadratic_cost(Mat::Identity(2, 2)));
  CHECK(gb_quad.b1 == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(gb_quad.b2 == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("quartic growth bounds agree with the 1-D oracle") {
  const auto gb = growth_bounds(quartic2d());
  const auto oracle = oracle_quartic_bounds();
  CHECK(gb.b1 == doctest::Approx(oracle.b1).epsilon(1e-6));
  CHECK(gb.b2 == doctest::Approx(oracle.b2).epsilon(1e-6));
  CHECK(gb.b1 == doctest::Approx(0.0778).epsilon(1e-2));
  CHECK(gb.b2 == doctest::Approx(4.2856).epsilon(1e-2));
}

TEST_CASE("quartic sandwich b1||x||^4 <= J <= b2||x||^4") {
  const auto cost = quartic2d();
  const auto gb = growth_bounds(cost);
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> log_r(-3.0, 3.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double r = std::pow(10.0, log_r(rng));
    const double t = angle(rng);
    const Vec x = r * v2(std::cos(t), std::sin(t));
    const double J = cost.eval(x);
    const double r4 = r * r * r * r;
    CHECK(J >= gb.b1 * r4 * (1.0 - 1e-9));
    CHECK(J <= gb.b2 * r4 * (1.0 + 1e-9));
  }
}

TEST_CASE("growth bounds for n=3 quadratic bracket the eigenvalue range") {
  std::mt19937_64 rng(104);
  const Mat Q = random_spd(rng, 3);
  const auto gb = growth_bounds(quadratic_cost(Q));
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
  CHECK(gb.b1 == doctest::Approx(eig.eigenvalues().minCoeff() / 2).epsilon(1e-6));
  CHECK(gb.b2 == doctest::Approx(eig.eigenvalues().maxCoeff() / 2).epsilon(1e-6));
}

TEST_CASE("growth bounds reject non-homogeneous costs") {
  CostFunction shifted;
  shifted.id = "shifted";
  shifted.dim = 2;
  shifted.eval = [](const Vec& x) { return (x - Vec::Ones(2)).squaredNorm(); };
  CHECK_THROWS_AS(growth_bounds(shifted), std::invalid_argument);
}

TEST_CASE("ultimate bound gain") {
  const GrowthBounds gb{0.0777796646708, 4.2856103165790};
  CHECK(ultimate_bound_gain(gb, 1.0) == doctest::Approx(29.3072).epsilon(1e-4));
  CHECK(ultimate_bound_gain(gb, 0.01) ==
        doctest::Approx(0.293072).epsilon(1e-4));
  CHECK_THROWS_AS(ultimate_bound_gain(GrowthBounds{0.0, 1.0}, 1.0),
                  std::invalid_argument);
}

}  // TEST_SUITE
