#pragma once

#include <cmath>
#include <stdexcept>

#include "secretary/builders.hpp"
#include "secretary/greedy_dual.hpp"
#include "secretary/policy.hpp"

namespace secretary {

namespace detail {

inline void check_binary_params(double p, double p_prime) {
  if (!(p >= 0.5 && p <= 1.0) || !(p_prime >= 0.5 && p_prime <= 1.0))
    throw std::invalid_argument("binary advice parameters must lie in [1/2, 1]");
}

/// pow with the continuity conventions at perfect advice: 0^0 = 1, and
/// 0^x = 0 for x > 0.
inline double pow_limit(double base, double expo) {
  if (base == 0.0) return expo == 0.0 ? 1.0 : 0.0;
  return std::pow(base, expo);
}

}  // namespace detail

struct AsymptoticThresholds {
  double t_yes_frac = 0.0;  // t_Y / n
  double t_no_frac = 0.0;   // t_N / n
};

/// Large-n thresholds as fractions of the horizon:
///   t_N/n = e^{p/p' - 1/p'},   t_Y/n = ((1-p')/p)^{1/p'} * t_N/n.
/// The ratio factor is <= 1 (since 1-p' <= 1/2 <= p), so t_Y <= t_N always.
inline AsymptoticThresholds asymptotic_thresholds(double p, double p_prime) {
  detail::check_binary_params(p, p_prime);
  const double t_no = std::exp(p / p_prime - 1.0 / p_prime);
  const double t_yes = detail::pow_limit((1.0 - p_prime) / p, 1.0 / p_prime) * t_no;
  return {t_yes, t_no};
}

/// Large-n winning probability ((1-p')/p)^{(1-p')/p} e^{p/p' - 1/p'}.
///
/// The exponent (1-p')/p follows the closed-form statement; the proof's
/// final display instead shows (1-p')/p', which does not reproduce the
/// reported dashed-curve values (e.g. 0.391431 at p = 5/9, p' = 7/9, where
/// the statement form matches to ~1e-5 and the proof form gives ~0.435).
inline double asymptotic_ratio(double p, double p_prime) {
  detail::check_binary_params(p, p_prime);
  const double base = (1.0 - p_prime) / p;
  return detail::pow_limit(base, base) * std::exp(p / p_prime - 1.0 / p_prime);
}

struct BinaryFiniteReport {
  int t_yes = 0;  // in 1..n+1, n+1 = never
  int t_no = 0;
  double objective = 0.0;
};

/// Exact finite-n pipeline: build -> greedy dual (O(n) suffix-sum
/// recursion) -> thresholds -> tight primal -> winning probability.
inline BinaryFiniteReport finite_n_binary_report(int n, double p, double p_prime) {
  detail::check_binary_params(p, p_prime);
  const AdviceModel model = build_binary(n, p, p_prime);
  const DualSolution dual = solve_greedy(model);
  const ThresholdExtraction ext = extract_thresholds(dual);
  if (!ext.is_threshold())
    throw std::logic_error("finite_n_binary_report: greedy dual unexpectedly non-monotone");
  const PrimalSolution primal = threshold_to_primal(*ext.policy, model);
  return {ext.policy->at(0), ext.policy->at(1), evaluate_policy(primal, model)};
}

}  // namespace secretary
