#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "esclab/dither.hpp"

using namespace esclab;

namespace {

// Brute-force admissibility oracle: every index tuple, every sign branch,
// written as plainly as possible and independent of the library's
// canonicalized enumeration.
bool brute_valid(const std::vector<int>& w, RateOrder order) {
  const int n = static_cast<int>(w.size());
  auto A = [&](int i) { return std::abs(w[i]); };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (w[i] == w[j]) return false;
      if (A(i) == 2 * A(j)) return false;
    }
  }
  if (order == RateOrder::First) return true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || i == k || j == k) continue;
        for (int s : {1, -1}) {
          if (A(i) + s * A(j) == A(k)) return false;
          if (A(i) + s * A(j) == 2 * A(k)) return false;
        }
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (i == j || k == l) continue;
          if (k == i || k == j || l == i || l == j) continue;
          for (int s1 : {1, -1})
            for (int s2 : {1, -1}) {
              if (A(i) + s1 * A(j) == A(k) + s2 * A(l)) return false;
            }
        }
  return true;
}

bool has_rule(const std::vector<RateViolation>& vs, const std::string& rule) {
  for (const auto& v : vs) {
    if (v.rule == rule) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("dither") {

TEST_CASE("named verdicts from the rate restrictions") {
  CHECK(validate_rates({1, 3}, RateOrder::First).valid);
  const auto bad = validate_rates({1, 2}, RateOrder::First);
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].rule == "double-rate");
  CHECK(bad.violations[0].rates == std::vector<int>{2, 1});

  const auto second = validate_rates({1, 3, 5}, RateOrder::Second);
  CHECK_FALSE(second.valid);
  REQUIRE(has_rule(second.violations, "sum-double-rate"));
  bool found = false;
  for (const auto& v : second.violations) {
    if (v.rule == "sum-double-rate" && v.rates == std::vector<int>{1, 5, 3}) {
      found = true;  // 1 + 5 = 2*3
    }
  }
  CHECK(found);

  CHECK(validate_rates({5, 7, 11}, RateOrder::Second).valid);
}

TEST_CASE("agreement with the brute-force oracle, n<=4, rates<=15") {
  // Exhaustive over strictly increasing positive vectors.
  long long checked = 0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> idx(n);
    std::function<void(int, int)> rec = [&](int pos, int next) {
      if (pos == n) {
        for (RateOrder order : {RateOrder::First, RateOrder::Second}) {
          const bool lib = validate_rates(idx, order).valid;
          const bool ref = brute_valid(idx, order);
          if (lib != ref) {
            CAPTURE(idx[0]);
            CAPTURE(order == RateOrder::First);
            REQUIRE(lib == ref);
          }
          ++checked;
        }
        return;
      }
      for (int r = next; r <= 15; ++r) {
        idx[pos] = r;
        rec(pos + 1, r + 1);
      }
    };
    rec(0, 1);
  }
  CHECK(checked == 2 * (15 + 105 + 455 + 1365));

  // Seeded random vectors with mixed signs and arbitrary order.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(1, 4);
  std::uniform_int_distribution<int> val(-15, 15);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> w(len(rng));
    for (auto& x : w) {
      do {
        x = val(rng);
      } while (x == 0);
    }
    for (RateOrder order : {RateOrder::First, RateOrder::Second}) {
      CHECK(validate_rates(w, order).valid == brute_valid(w, order));
    }
  }
}

TEST_CASE("zero and empty rate vectors are rejected") {
  CHECK_THROWS_AS(validate_rates({}, RateOrder::First), std::invalid_argument);
  CHECK_THROWS_AS(validate_rates({1, 0}, RateOrder::First), std::invalid_argument);
}

TEST_CASE("second-order conditions with non-distinct indices are flagged") {
  // (1,3) passes the rules as written (three distinct indices need n>=3) but
  // 3 - 1 = 2*1 fails the relaxed k-in-{i,j} reading.
  const auto report = validate_rates({1, 3}, RateOrder::Second);
  CHECK(report.valid);
  CHECK(has_rule(report.nondistinct_warnings, "sum-double-rate"));
  // (1,4) is clean under both readings.
  const auto clean = validate_rates({1, 4}, RateOrder::Second);
  CHECK(clean.valid);
  CHECK(clean.nondistinct_warnings.empty());
}

TEST_CASE("normalize_amplitudes") {
  const double s = std::sqrt(145.0);
  Vec raw(2);
  raw << 12, 1;
  Vec r = normalize_amplitudes(raw);
  CHECK(r[0] == doctest::Approx(12.0 / s).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(1.0 / s).epsilon(1e-15));

  Vec one(1);
  one << 1;
  CHECK(normalize_amplitudes(one)[0] == 1.0);

  Vec tri(2);
  tri << 3, 4;
  r = normalize_amplitudes(tri);
  CHECK(r[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(0.8).epsilon(1e-15));

  Vec zero(2);
  zero << 1, 0;
  CHECK_THROWS_AS(normalize_amplitudes(zero), std::invalid_argument);
}

TEST_CASE("dither spec construction and evaluation") {
  Vec raw(2);
  raw << 1, 1;
  const auto spec = make_dither_spec({1, 3}, raw, 0.5, 100.0);
  CHECK(std::abs(spec.rel_amplitudes.squaredNorm() - 1.0) <= 1e-12);
  CHECK(spec.checked_order == RateOrder::First);

  CHECK(eval_dither(spec, 0.0).norm() == 0.0);
  const Vec s = eval_dither(spec, std::numbers::pi / 2);
  CHECK(s[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(make_dither_spec({1, 2}, raw, 0.5, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(make_dither_spec({1, 3}, raw, 0.0, 100.0), std::invalid_argument);
  CHECK_THROWS_AS(make_dither_spec({1, 3}, raw, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("dither periodicity and amplitude envelope") {
  Vec raw(3);
  raw << 2, -1, 0.5;
  const auto spec = make_dither_spec({5, 7, 11}, raw, 1.0, 10.0, RateOrder::Second);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-50.0, 50.0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int trial = 0; trial < 1000; ++trial) {
    const double tau = uni(rng);
    const Vec s = eval_dither(spec, tau);
    const Vec s2 = eval_dither(spec, tau + two_pi);
    CHECK((s - s2).cwiseAbs().maxCoeff() <= 1e-12);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(s[i]) <= std::abs(spec.rel_amplitudes[i]) + 1e-15);
    }
  }
}

TEST_CASE("enumerate_admissible") {
  const auto first23 = enumerate_admissible(2, 3, RateOrder::First);
  const std::vector<int> good{1, 3};
  const std::vector<int> bad{1, 2};
  CHECK(std::find(first23.begin(), first23.end(), good) != first23.end());
  CHECK(std::find(first23.begin(), first23.end(), bad) == first23.end());

  const auto second3 = enumerate_admissible(3, 11, RateOrder::Second);
  const std::vector<int> prime{5, 7, 11};
  CHECK(std::find(second3.begin(), second3.end(), prime) != second3.end());

  const auto single = enumerate_admissible(1, 1, RateOrder::First);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == std::vector<int>{1});

  // Second-order admissible vectors are a subset of first-order ones.
  for (int n : {2, 3}) {
    const auto first = enumerate_admissible(n, 9, RateOrder::First);
    const auto second = enumerate_admissible(n, 9, RateOrder::Second);
    for (const auto& w : second) {
      CHECK(std::find(first.begin(), first.end(), w) != first.end());
    }
    CHECK(second.size() <= first.size());
  }

  CHECK_THROWS_AS(enumerate_admissible(0, 3, RateOrder::First), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_admissible(4, 3, RateOrder::First), std::invalid_argument);
}

}  // TEST_SUITE
