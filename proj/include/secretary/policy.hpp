#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "secretary/advice_model.hpp"
#include "secretary/numeric.hpp"

namespace secretary {

namespace detail {

/// Prefix loads L(i,s) = sum_{j<i} sum_{s'} z(j,s') c(i,s,j,s'), i.e. the
/// probability that some earlier candidate was already picked. For samples
/// kernels this runs in O(n*m): the earlier-period coefficient
/// c(i,s,j,s') = P_j(s')/Q_j(s) does not depend on i, and folding period j
/// costs one prefix sweep because the diagonal ratio P_j(s)/Q_j(s) = 1/(s+j)
/// and Q_j(s-1)/Q_j(s) = s/(s+j).
inline std::vector<double> prefix_loads(const std::vector<double>& z, const AdviceModel& model) {
  const int n = model.horizon();
  const int m = model.signal_count();
  const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  std::vector<double> load(nm, 0.0);

  if (model.has_samples_kernel()) {
    std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
    for (int i = 1; i <= n; ++i) {
      for (int s = 0; s < m; ++s) load[model.flat(i, s)] = acc[static_cast<std::size_t>(s)];
      double x = 0.0;  // sum_{s'<=s} z(i,s') P_i(s')/Q_i(s)
      for (int s = 0; s < m; ++s) {
        x = x * s / (s + i) + z[model.flat(i, s)] / (s + i);
        acc[static_cast<std::size_t>(s)] += x;
      }
    }
    return load;
  }

  if (model.has_binary_kernel()) {
    const double pp = model.specificity();
    double wsum = 0.0;  // sum_{j<i} (1/j) [(1-p') z_j^Y + p' z_j^N]
    for (int i = 1; i <= n; ++i) {
      load[model.flat(i, 0)] = wsum;
      load[model.flat(i, 1)] = wsum;
      wsum += ((1.0 - pp) * z[model.flat(i, 0)] + pp * z[model.flat(i, 1)]) / i;
    }
    return load;
  }

  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) {
      CompensatedSum acc;
      for (int j = 1; j < i; ++j)
        for (int sp = 0; sp < m; ++sp) acc.add(z[model.flat(j, sp)] * model.c(i, s, j, sp));
      load[model.flat(i, s)] = acc.value();
    }
  return load;
}

}  // namespace detail

/// Winning probability sum z(i,s) a(i,s) of a feasible primal point.
inline double evaluate_policy(const PrimalSolution& z, const AdviceModel& model) {
  const int n = model.horizon();
  const int m = model.signal_count();
  CompensatedSum acc;
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) acc.add(z.at(i, s) * model.a(i, s));
  return acc.value();
}

/// Converts a feasible primal point into the memoryless policy that realises
/// it:  q(i,s) = z(i,s) / (1 - L(i,s))  with L the prefix load. Unreachable
/// states (0/0) get q = 0. Throws if z is infeasible (negative denominator
/// or q > 1 beyond tolerance).
inline MemorylessPolicy primal_to_policy(const PrimalSolution& z, const AdviceModel& model) {
  constexpr double kFeasTol = 1e-9;
  const int n = model.horizon();
  const int m = model.signal_count();
  const std::vector<double> load = detail::prefix_loads(z.z, model);

  MemorylessPolicy pol{n, m, std::vector<double>(z.z.size(), 0.0)};
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) {
      const double denom = 1.0 - load[model.flat(i, s)];
      const double num = z.at(i, s);
      if (denom <= 0.0) {
        if (num > kFeasTol || denom < -kFeasTol)
          throw std::invalid_argument("primal_to_policy: infeasible z (denominator " +
                                      std::to_string(denom) + ")");
        continue;  // unreachable state, q stays 0
      }
      double q = num / denom;
      if (q > 1.0 + kFeasTol)
        throw std::invalid_argument("primal_to_policy: infeasible z (q = " + std::to_string(q) +
                                    ")");
      pol.q[model.flat(i, s)] = std::clamp(q, 0.0, 1.0);
    }
  return pol;
}

/// Primal point of a threshold policy by forward recursion: z(i,s) = 0
/// before the threshold, and the (i,s) row is tight from t(s) onwards.
inline PrimalSolution threshold_to_primal(const ThresholdPolicy& policy, const AdviceModel& model) {
  const int n = model.horizon();
  const int m = model.signal_count();
  if (policy.n != n || policy.m != m)
    throw std::invalid_argument("threshold_to_primal: policy/model shape mismatch");

  PrimalSolution sol{n, m,
                     std::vector<double>(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0.0),
                     0.0};

  if (model.has_samples_kernel() || model.has_binary_kernel()) {
    // same co-moving accumulators as prefix_loads, interleaved with the
    // z assignment so each period sees the loads of strictly earlier ones
    if (model.has_samples_kernel()) {
      std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
      for (int i = 1; i <= n; ++i) {
        for (int s = 0; s < m; ++s)
          if (i >= policy.at(s)) {
            const double z = 1.0 - acc[static_cast<std::size_t>(s)];
            if (z < -1e-9)
              throw std::invalid_argument("threshold_to_primal: negative z from recursion");
            sol.z[model.flat(i, s)] = std::max(0.0, z);
          }
        double x = 0.0;
        for (int s = 0; s < m; ++s) {
          x = x * s / (s + i) + sol.z[model.flat(i, s)] / (s + i);
          acc[static_cast<std::size_t>(s)] += x;
        }
      }
    } else {
      const double pp = model.specificity();
      double wsum = 0.0;
      for (int i = 1; i <= n; ++i) {
        for (int s = 0; s < 2; ++s)
          if (i >= policy.at(s)) {
            if (1.0 - wsum < -1e-9)
              throw std::invalid_argument("threshold_to_primal: negative z from recursion");
            sol.z[model.flat(i, s)] = std::max(0.0, 1.0 - wsum);
          }
        wsum += ((1.0 - pp) * sol.z[model.flat(i, 0)] + pp * sol.z[model.flat(i, 1)]) / i;
      }
    }
  } else {
    for (int i = 1; i <= n; ++i)
      for (int s = 0; s < m; ++s) {
        if (i < policy.at(s)) continue;
        CompensatedSum acc;
        for (int j = 1; j < i; ++j)
          for (int sp = 0; sp < m; ++sp) acc.add(sol.z[model.flat(j, sp)] * model.c(i, s, j, sp));
        const double z = 1.0 - acc.value();
        if (z < -1e-9)
          throw std::invalid_argument("threshold_to_primal: negative z from recursion");
        sol.z[model.flat(i, s)] = std::max(0.0, z);
      }
  }

  sol.objective = evaluate_policy(sol, model);
  return sol;
}

}  // namespace secretary
