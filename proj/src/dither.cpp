#include "esclab/dither.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace esclab {

RateOrder parse_rate_order(const std::string& name) {
  if (name == "first") return RateOrder::First;
  if (name == "second") return RateOrder::Second;
  throw std::invalid_argument("unknown rate order: " + name);
}

std::string rate_order_name(RateOrder order) {
  return order == RateOrder::First ? "first" : "second";
}

namespace {

void add(std::vector<RateViolation>& out, const std::vector<int>& rates,
         std::string rule, std::vector<int> idx) {
  RateViolation v;
  v.rule = std::move(rule);
  for (int i : idx) v.rates.push_back(rates[static_cast<std::size_t>(i)]);
  v.indices = std::move(idx);
  out.push_back(std::move(v));
}

}  // namespace

ValidationReport validate_rates(const std::vector<int>& rates,
                                RateOrder order) {
  const int n = static_cast<int>(rates.size());
  if (n == 0) throw std::invalid_argument("rate vector is empty");
  for (int i = 0; i < n; ++i) {
    if (rates[i] == 0) throw std::invalid_argument("rate entries must be nonzero");
  }
  ValidationReport report;
  auto abs_rate = [&](int i) { return std::abs(rates[i]); };

  // First-order pair rules.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (i < j && rates[i] == rates[j]) {
        add(report.violations, rates, "equal-rates", {i, j});
      }
      if (abs_rate(i) == 2 * abs_rate(j)) {
        add(report.violations, rates, "double-rate", {i, j});
      }
    }
  }

  if (order == RateOrder::Second) {
    // |w'_i| +- |w'_j| compared against |w'_k| and 2|w'_k|, all distinct.
    // The "+" branch is symmetric in (i, j), so it is enumerated with i < j.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int s : {+1, -1}) {
          if (s > 0 && i > j) continue;
          const int lhs = abs_rate(i) + s * abs_rate(j);
          for (int k = 0; k < n; ++k) {
            const bool distinct = (k != i && k != j);
            if (lhs == abs_rate(k)) {
              if (distinct) {
                add(report.violations, rates, "sum-rate", {i, j, k});
              } else if (lhs != 0) {
                add(report.nondistinct_warnings, rates, "sum-rate", {i, j, k});
              }
            }
            if (lhs == 2 * abs_rate(k)) {
              if (distinct) {
                add(report.violations, rates, "sum-double-rate", {i, j, k});
              } else {
                add(report.nondistinct_warnings, rates, "sum-double-rate",
                    {i, j, k});
              }
            }
          }
        }
      }
    }
    // |w'_i| +- |w'_j| != |w'_k| +- |w'_l| for four distinct indices.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int s1 : {+1, -1}) {
          if (s1 > 0 && i > j) continue;
          const int lhs = abs_rate(i) + s1 * abs_rate(j);
          for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
              if (k == l) continue;
              for (int s2 : {+1, -1}) {
                if (s2 > 0 && k > l) continue;
                // Avoid listing each equality twice (sides swapped).
                if (std::vector<int>{k, l, (1 - s2) / 2} <
                    std::vector<int>{i, j, (1 - s1) / 2})
                  continue;
                const bool distinct =
                    k != i && k != j && l != i && l != j;
                const bool same_instance = (k == i && l == j && s1 == s2);
                if (lhs != abs_rate(k) + s2 * abs_rate(l)) continue;
                if (distinct) {
                  add(report.violations, rates, "sum-sum", {i, j, k, l});
                } else if (!same_instance) {
                  add(report.nondistinct_warnings, rates, "sum-sum",
                      {i, j, k, l});
                }
              }
            }
          }
        }
      }
    }
  }

  report.valid = report.violations.empty();
  return report;
}

Vec normalize_amplitudes(const Vec& raw) {
  if (raw.size() == 0) throw std::invalid_argument("amplitude vector is empty");
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (raw[i] == 0.0) {
      throw std::invalid_argument("relative amplitudes must be nonzero");
    }
  }
  return raw / raw.norm();
}

DitherSpec make_dither_spec(std::vector<int> rates, const Vec& raw_amplitudes,
                            double amplitude, double base_frequency,
                            RateOrder order) {
  if (static_cast<Eigen::Index>(rates.size()) != raw_amplitudes.size()) {
    throw std::invalid_argument("rates and amplitudes disagree in length");
  }
  if (amplitude <= 0.0) throw std::invalid_argument("dither amplitude must be positive");
  if (base_frequency <= 0.0) {
    throw std::invalid_argument("dither base frequency must be positive");
  }
  const ValidationReport report = validate_rates(rates, order);
  if (!report.valid) {
    const RateViolation& v = report.violations.front();
    throw std::invalid_argument("inadmissible dither rates: rule " + v.rule);
  }
  DitherSpec spec;
  spec.rates = std::move(rates);
  spec.rel_amplitudes = normalize_amplitudes(raw_amplitudes);
  spec.amplitude = amplitude;
  spec.base_frequency = base_frequency;
  spec.checked_order = order;
  return spec;
}

Vec eval_dither(const DitherSpec& spec, double tau) {
  Vec s(spec.dim());
  for (int i = 0; i < spec.dim(); ++i) {
    s[i] = spec.rel_amplitudes[i] * std::sin(spec.rates[i] * tau);
  }
  return s;
}

namespace {

void enumerate_rec(int n, int max_rate, RateOrder order, int next,
                   std::vector<int>& current,
                   std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == n) {
    if (validate_rates(current, order).valid) out.push_back(current);
    return;
  }
  const int remaining = n - static_cast<int>(current.size());
  for (int r = next; r + remaining - 1 <= max_rate; ++r) {
    current.push_back(r);
    enumerate_rec(n, max_rate, order, r + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_admissible(int n, int max_rate,
                                                   RateOrder order) {
  if (n < 1) throw std::invalid_argument("enumerate_admissible: n must be >= 1");
  if (max_rate < n) {
    throw std::invalid_argument("enumerate_admissible: max_rate must be >= n");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  enumerate_rec(n, max_rate, order, 1, current, out);
  return out;
}

}  // namespace esclab
