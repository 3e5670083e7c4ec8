#pragma once

#include <string>
#include <vector>

#include "esclab/types.hpp"

namespace esclab {

enum class RateOrder { First, Second };

RateOrder parse_rate_order(const std::string& name);  // "first" / "second"
std::string rate_order_name(RateOrder order);

/// One violated rule instance. `indices` are 0-based positions into the rate
/// vector, in the order the rule names them; `rates` are the values there.
struct RateViolation {
  std::string rule;
  std::vector<int> indices;
  std::vector<int> rates;
};

struct ValidationReport {
  bool valid = true;
  std::vector<RateViolation> violations;
  // Second-order rule instances that fail only when the index-distinctness
  // requirement is relaxed to k (or l) in {i, j}. Such dithers are accepted
  // but estimator bias does not vanish; surfaced so the user can avoid them.
  std::vector<RateViolation> nondistinct_warnings;
};

/// First order: w'_i != w'_j and |w'_i| != 2|w'_j| for i != j.
/// Second order adds, for all distinct i, j, k, l:
///   |w'_i| +- |w'_j| != |w'_k|, != 2|w'_k|, and != |w'_k| +- |w'_l|.
/// Exact integer arithmetic; rejects zero entries and empty vectors.
ValidationReport validate_rates(const std::vector<int>& rates, RateOrder order);

/// Scales `raw` so the sum of squares is 1. Errors on zero entries.
Vec normalize_amplitudes(const Vec& raw);

struct DitherSpec {
  std::vector<int> rates;  // relative rates w'_i, nonzero integers
  Vec rel_amplitudes;      // r_i, sum of squares 1
  double amplitude = 0.0;  // a > 0
  double base_frequency = 0.0;  // omega > 0
  RateOrder checked_order = RateOrder::First;

  int dim() const { return static_cast<int>(rates.size()); }
};

/// Builds a spec from raw (unnormalized) amplitudes, validating the rates at
/// the requested order. Throws std::invalid_argument on any violation.
DitherSpec make_dither_spec(std::vector<int> rates, const Vec& raw_amplitudes,
                            double amplitude, double base_frequency,
                            RateOrder order = RateOrder::First);

/// s_i(tau) = r_i sin(w'_i tau); tau is the dimensionless phase omega*t.
Vec eval_dither(const DitherSpec& spec, double tau);

/// All strictly increasing positive integer rate vectors of length n with
/// entries <= max_rate passing validate_rates, in lexicographic order.
std::vector<std::vector<int>> enumerate_admissible(int n, int max_rate,
                                                   RateOrder order);

}  // namespace esclab
