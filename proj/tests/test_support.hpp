#pragma once

// Shared fixtures and brute-force oracles for the test suites. The oracles
// enumerate instances directly and never touch the solver code paths they
// are used to check.

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "secretary/builders.hpp"
#include "secretary/advice_model.hpp"

namespace testsupport {

/// Four-period chain whose optimal policy is memoryless but not threshold:
/// two equiprobable signal paths (1,2,0,0) and (1,0,2,3). States carry the
/// observable level; repeated levels encode the time-dependent branching.
inline secretary::MarkovChainSpec counterexample_chain() {
  secretary::MarkovChainSpec spec;
  spec.states = {1, 2, 0, 0, 2, 3, 0};
  spec.initial = {1, 0, 0, 0, 0, 0, 0};
  spec.transition = {
      {0, 0.5, 0.5, 0, 0, 0, 0},
      {0, 0, 0, 1, 0, 0, 0},
      {0, 0, 0, 0, 1, 0, 0},
      {0, 0, 0, 0, 0, 0, 1},
      {0, 0, 0, 0, 0, 1, 0},
      {0, 0, 0, 0, 0, 1, 0},
      {0, 0, 0, 0, 0, 0, 1},
  };
  spec.horizon = 4;
  return spec;
}

namespace oracle {

/// Win probability of a single-threshold policy on the classic problem,
/// by enumerating all n! arrival orders.
inline double classic_threshold(int n, int t) {
  std::vector<int> ranks(static_cast<std::size_t>(n));
  std::iota(ranks.begin(), ranks.end(), 1);
  long long wins = 0, total = 0;
  do {
    ++total;
    int best = 0;
    for (int i = 0; i < n; ++i) {
      if (ranks[static_cast<std::size_t>(i)] < best) continue;
      best = ranks[static_cast<std::size_t>(i)];
      if (i + 1 >= t) {
        wins += best == n ? 1 : 0;
        break;
      }
    }
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return static_cast<double>(wins) / static_cast<double>(total);
}

/// Win probability of a per-signal threshold policy on the samples model,
/// by enumerating all (n+k)! value assignments: positions 0..k-1 are the
/// samples, positions k.. are the online arrival order.
inline double samples_threshold(int n, int k, const std::vector<int>& t) {
  std::vector<int> value(static_cast<std::size_t>(n + k));
  std::iota(value.begin(), value.end(), 0);
  long long wins = 0, total = 0;
  do {
    ++total;
    int winner = 0;
    for (int i = 1; i < n; ++i)
      if (value[static_cast<std::size_t>(k + i)] > value[static_cast<std::size_t>(k + winner)])
        winner = i;
    int best_value = -1;
    for (int i = 0; i < n; ++i) {
      const int v = value[static_cast<std::size_t>(k + i)];
      if (v < best_value) continue;
      best_value = v;
      int sig = 0;
      for (int j = 0; j < k; ++j)
        if (value[static_cast<std::size_t>(j)] < v) ++sig;
      if (i + 1 >= t[static_cast<std::size_t>(sig)]) {
        wins += i == winner ? 1 : 0;
        break;
      }
    }
  } while (std::next_permutation(value.begin(), value.end()));
  return static_cast<double>(wins) / static_cast<double>(total);
}

/// Exact win probability of a memoryless policy on a finite chain, by
/// enumerating all state paths and integrating the stopping process.
inline double markov_memoryless(const secretary::MarkovChainSpec& spec,
                                const secretary::MemorylessPolicy& policy) {
  const auto levels = secretary::markov_value_levels(spec);
  const int n = spec.horizon;
  const int ns = static_cast<int>(spec.states.size());
  double win = 0.0;

  std::vector<int> path(static_cast<std::size_t>(n));
  auto dfs = [&](auto&& self, int depth, double prob) -> void {
    if (prob == 0.0) return;
    if (depth == n) {
      std::vector<double> vals(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = spec.states[static_cast<std::size_t>(path[static_cast<std::size_t>(i)])];
      const double path_max = *std::max_element(vals.begin(), vals.end());
      double reach = 1.0;
      double prefix = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const double v = vals[static_cast<std::size_t>(i)];
        if (v >= prefix) {
          const int sig = static_cast<int>(std::lower_bound(levels.begin(), levels.end(), v) - levels.begin());
          const double q = policy.at(i + 1, sig);
          if (v == path_max) win += prob * reach * q;
          reach *= 1.0 - q;
        }
        prefix = std::max(prefix, v);
      }
      return;
    }
    for (int st = 0; st < ns; ++st) {
      const double step = depth == 0 ? spec.initial[static_cast<std::size_t>(st)]
                                     : spec.transition[static_cast<std::size_t>(path[static_cast<std::size_t>(depth - 1)])][static_cast<std::size_t>(st)];
      if (step == 0.0) continue;
      path[static_cast<std::size_t>(depth)] = st;
      self(self, depth + 1, prob * step);
    }
  };
  dfs(dfs, 0, 1.0);
  return win;
}

/// Closed-form classic threshold value (t-1)/n * sum_{j=t-1}^{n-1} 1/j.
inline double classic_threshold_closed_form(int n, int t) {
  if (t <= 1) return 1.0 / n;
  double h = 0.0;
  for (int j = t - 1; j <= n - 1; ++j) h += 1.0 / j;
  return (t - 1.0) / n * h;
}

}  // namespace oracle
}  // namespace testsupport
