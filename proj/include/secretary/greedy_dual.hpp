#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "secretary/advice_model.hpp"
#include "secretary/builders.hpp"
#include "secretary/numeric.hpp"

namespace secretary {

namespace detail {
inline std::size_t table_index(int m, int i, int s) {
  return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
         static_cast<std::size_t>(s);
}
}  // namespace detail

/// Greedy backward induction on the dual LP:
///   u(n,s) = a(n,s)
///   u(i,s) = max{0, a(i,s) - sum_{j>i} sum_{s'} u(j,s') c(j,s',i,s)}
/// The result is dual-feasible by construction.
///
/// Separable models use co-moving accumulators so the sweep costs O(n*m):
/// for samples, Phi_i(s') carries sum_{j>i} u(j,s') rescaled into the frame
/// of period i (every stored quantity stays in [0,1], no log-domain tricks);
/// for binary advice a single suffix sum of u_j^Y + u_j^N suffices. Dense
/// models run the direct O(n^2 m^2) recursion.
inline DualSolution solve_greedy(const AdviceModel& model) {
  const int n = model.horizon();
  const int m = model.signal_count();
  DualSolution out{n, m,
                   std::vector<double>(static_cast<std::size_t>(n) * static_cast<std::size_t>(m)),
                   0.0};

  if (model.has_samples_kernel()) {
    const int k = model.sample_count();  // m == k+1
    // u(i,s) = pre(i,s) * w(i,s) with pre(i,s) the first i-1 factors of a(s);
    // w(i,s) = max{0, r(i,s) - sum_{s'>=s} Phi_i(s')} where
    // r(i,s) = prod_{t=i}^{n-1} (s+t)/(k+t+1) and
    // Phi_i(s') = [Phi_{i+1}(s') * (s'+i+1) + w(i+1,s')] / (k+i+1).
    std::vector<double> w(static_cast<std::size_t>(m), 0.0);    // w(i+1, .)
    std::vector<double> phi(static_cast<std::size_t>(m), 0.0);  // Phi_i(.)
    std::vector<double> r(static_cast<std::size_t>(m), 1.0);
    std::vector<double> pre(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s) pre[static_cast<std::size_t>(s)] = model.a(n, s);
    for (int i = n; i >= 1; --i) {
      if (i < n) {
        for (int s = 0; s < m; ++s) {
          const auto si = static_cast<std::size_t>(s);
          phi[si] = (phi[si] * (s + i + 1) + w[si]) / static_cast<double>(k + i + 1);
          r[si] *= static_cast<double>(s + i) / (k + i + 1);
          pre[si] *= static_cast<double>(k + i + 1) / (s + i);
        }
      }
      double suffix = 0.0;
      for (int s = m - 1; s >= 0; --s) {
        const auto si = static_cast<std::size_t>(s);
        suffix += phi[si];
        w[si] = std::max(0.0, r[si] - suffix);
        out.u[detail::table_index(m, i, s)] = pre[si] * w[si];
      }
    }
  } else if (model.has_binary_kernel()) {
    const double p = model.recall();
    const double pp = model.specificity();
    double tail = 0.0;  // sum_{j>i} (u_j^Y + u_j^N)
    for (int i = n; i >= 1; --i) {
      if (i < n) tail += out.u[detail::table_index(m, i + 1, 0)] + out.u[detail::table_index(m, i + 1, 1)];
      out.u[detail::table_index(m, i, 0)] = std::max(0.0, p / n - (1.0 - pp) / i * tail);
      out.u[detail::table_index(m, i, 1)] = std::max(0.0, (1.0 - p) / n - pp / i * tail);
    }
  } else {
    for (int i = n; i >= 1; --i) {
      for (int s = 0; s < m; ++s) {
        CompensatedSum acc;
        for (int j = i + 1; j <= n; ++j)
          for (int sp = 0; sp < m; ++sp)
            acc.add(out.u[detail::table_index(m, j, sp)] * model.c(j, sp, i, s));
        out.u[detail::table_index(m, i, s)] = std::max(0.0, model.a(i, s) - acc.value());
      }
    }
  }

  out.objective = compensated_sum(out.u);
  return out;
}

/// Per-signal monotonicity of u(i,s) in i.
struct MonotonicityReport {
  int n = 0, m = 0;
  std::vector<std::uint8_t> nondecreasing;

  bool all_monotone() const {
    for (auto b : nondecreasing)
      if (!b) return false;
    return true;
  }
  std::vector<int> violating_signals() const {
    std::vector<int> out;
    for (int s = 0; s < m; ++s)
      if (!nondecreasing[static_cast<std::size_t>(s)]) out.push_back(s);
    return out;
  }
};

inline MonotonicityReport is_monotone(const DualSolution& dual, double tol = 1e-12) {
  MonotonicityReport rep{dual.n, dual.m, std::vector<std::uint8_t>(static_cast<std::size_t>(dual.m), 1)};
  for (int s = 0; s < dual.m; ++s)
    for (int i = 1; i < dual.n; ++i)
      if (dual.at(i + 1, s) < dual.at(i, s) - tol) {
        rep.nondecreasing[static_cast<std::size_t>(s)] = 0;
        break;
      }
  return rep;
}

/// Threshold extraction result. `policy` is engaged iff the dual is
/// monotone for every signal; otherwise the monotonicity report carries the
/// offending signals and no threshold policy exists (non-threshold
/// diagnosis).
struct ThresholdExtraction {
  std::optional<ThresholdPolicy> policy;
  MonotonicityReport monotonicity;

  bool is_threshold() const { return policy.has_value(); }
  std::vector<int> non_threshold_signals() const { return monotonicity.violating_signals(); }
};

/// t(s) = min{i : u(i,s) > eps}, or n+1 when u(.,s) never exceeds eps.
/// Defaults eps to 1e-12 of the objective scale. Greedy entries clip exact
/// zeros, so eps = 0 gives the strict-positivity thresholds; that is what
/// the large-k quantile mapping needs, where u(n,s) = a(s) can be far below
/// any objective-relative cutoff yet genuinely positive.
inline ThresholdExtraction extract_thresholds(const DualSolution& dual,
                                              std::optional<double> eps = std::nullopt) {
  const double cutoff = eps ? *eps : 1e-12 * dual.objective;
  ThresholdExtraction out{std::nullopt, is_monotone(dual)};
  if (!out.monotonicity.all_monotone()) return out;
  ThresholdPolicy pol{dual.n, dual.m, std::vector<int>(static_cast<std::size_t>(dual.m), dual.n + 1)};
  for (int s = 0; s < dual.m; ++s) {
    for (int i = 1; i <= dual.n; ++i) {
      if (dual.at(i, s) > cutoff) {
        pol.t[static_cast<std::size_t>(s)] = i;
        break;
      }
    }
  }
  out.policy = std::move(pol);
  return out;
}

/// Diagnostic for degenerate instances where the greedy argument lands
/// exactly at zero: re-solves with a(i,s) + epsilon * U(0,1) noise and
/// reports whether the extracted thresholds survive the perturbation.
struct ThresholdStabilityAudit {
  bool both_threshold = false;
  bool stable = false;
  std::vector<int> base_t;
  std::vector<int> perturbed_t;
};

inline ThresholdStabilityAudit audit_threshold_stability(const AdviceModel& model, double epsilon,
                                                         std::uint64_t seed) {
  const int n = model.horizon();
  const int m = model.signal_count();
  const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);

  const ThresholdExtraction base = extract_thresholds(solve_greedy(model));

  AdviceModel dense = densify(model);
  std::vector<double> a(nm), c(nm * nm);
  std::vector<std::string> labels;
  for (int s = 0; s < m; ++s) labels.push_back(model.signals().label(s));
  std::uint64_t state = seed;
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) {
      const double noise =
          static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
      a[dense.flat(i, s)] = dense.a(i, s) + epsilon * noise;
      for (int j = 1; j < i; ++j)
        for (int sp = 0; sp < m; ++sp)
          c[dense.flat(i, s) * nm + dense.flat(j, sp)] = dense.c(i, s, j, sp);
    }
  AdviceModel perturbed = AdviceModel::custom_dense(n, SignalSet(std::move(labels)), std::move(a),
                                                    std::move(c), model.tie_permitting());
  const ThresholdExtraction after = extract_thresholds(solve_greedy(perturbed));

  ThresholdStabilityAudit audit;
  audit.both_threshold = base.is_threshold() && after.is_threshold();
  if (base.is_threshold()) audit.base_t = base.policy->t;
  if (after.is_threshold()) audit.perturbed_t = after.policy->t;
  audit.stable = audit.both_threshold && audit.base_t == audit.perturbed_t;
  return audit;
}

}  // namespace secretary
