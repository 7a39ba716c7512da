#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "secretary/advice_model.hpp"

namespace secretary {

/// Finite Markov chain over real-valued signal levels. Levels may repeat:
/// two chain states can emit the same observable signal, which is how
/// time-inhomogeneous behaviour (as in the four-period counterexample) is
/// encoded on a homogeneous chain. The total order on signals is numeric.
struct MarkovChainSpec {
  std::vector<double> states;
  std::vector<double> initial;
  std::vector<std::vector<double>> transition;
  int horizon = 0;

  void validate() const {
    const std::size_t ns = states.size();
    if (ns == 0) throw std::invalid_argument("MarkovChainSpec: empty state list");
    if (horizon < 1) throw std::invalid_argument("MarkovChainSpec: horizon must be >= 1");
    if (initial.size() != ns)
      throw std::invalid_argument("MarkovChainSpec: initial distribution size mismatch");
    if (transition.size() != ns)
      throw std::invalid_argument("MarkovChainSpec: transition row count mismatch");
    double init_sum = 0.0;
    for (double p : initial) {
      if (p < 0.0) throw std::invalid_argument("MarkovChainSpec: negative initial probability");
      init_sum += p;
    }
    if (std::abs(init_sum - 1.0) > 1e-12)
      throw std::invalid_argument("MarkovChainSpec: initial distribution sums to " +
                                  std::to_string(init_sum));
    for (std::size_t r = 0; r < ns; ++r) {
      if (transition[r].size() != ns)
        throw std::invalid_argument("MarkovChainSpec: transition row " + std::to_string(r) +
                                    " has wrong length");
      double row_sum = 0.0;
      for (double p : transition[r]) {
        if (p < 0.0) throw std::invalid_argument("MarkovChainSpec: negative transition entry");
        row_sum += p;
      }
      if (std::abs(row_sum - 1.0) > 1e-12)
        throw std::invalid_argument("MarkovChainSpec: transition row " + std::to_string(r) +
                                    " sums to " + std::to_string(row_sum));
    }
  }
};

/// Sorted distinct signal levels of a chain; the returned order defines the
/// signal indices of the model built from it (and of simulated instances).
inline std::vector<double> markov_value_levels(const MarkovChainSpec& spec) {
  std::set<double> levels(spec.states.begin(), spec.states.end());
  return {levels.begin(), levels.end()};
}

/// Original secretary problem: one trivial signal, a(i) = 1/n and
/// c(i,.,j,.) = 1/j. Shares the samples kernel at k = 0, so the two agree
/// entrywise by construction.
inline AdviceModel build_classic(int n) {
  if (n < 1) throw std::invalid_argument("build_classic: n must be >= 1");
  return AdviceModel::from_samples_kernel(n, 0, ModelKind::classic);
}

/// Secretary with k samples: signals count how many samples the candidate
/// beats. Coefficients follow the sequential-insertion product formulas and
/// are kept in separable form; values stay in [0,1] because every partial
/// ratio does, so horizons up to n + k ~ 1e6 evaluate without overflow.
inline AdviceModel build_samples(int n, int k) {
  if (n < 1) throw std::invalid_argument("build_samples: n must be >= 1");
  if (k < 0) throw std::invalid_argument("build_samples: k must be >= 0");
  return AdviceModel::from_samples_kernel(n, k, ModelKind::samples);
}

/// Noisy binary classifier advice with the given recall and specificity.
inline AdviceModel build_binary(int n, double recall, double specificity) {
  return AdviceModel::from_binary_kernel(n, recall, specificity);
}

namespace detail {

struct MarkovAccumulator {
  int n, m;
  std::vector<double> a;        // n*m
  std::vector<double> p_best;   // P[T_i, s_i=v], n*m
  std::vector<double> joint;    // P[T_i,s_i=v, T_j,s_j=v'], (n*m)^2

  std::size_t flat(int i, int v) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + static_cast<std::size_t>(v);
  }

  void record_path(const std::vector<int>& value_idx, const std::vector<double>& values,
                   double prob) {
    double max_val = values[static_cast<std::size_t>(value_idx[0])];
    for (int i = 1; i < n; ++i)
      max_val = std::max(max_val, values[static_cast<std::size_t>(value_idx[i])]);

    // best-so-far flags, ties counting as best
    std::vector<int> best_idx;
    best_idx.reserve(static_cast<std::size_t>(n));
    double prefix_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double v = values[static_cast<std::size_t>(value_idx[i])];
      if (v >= prefix_max) best_idx.push_back(i);
      prefix_max = std::max(prefix_max, v);
    }

    for (int i = 0; i < n; ++i) {
      const double v = values[static_cast<std::size_t>(value_idx[i])];
      if (v == max_val) a[flat(i, value_idx[i])] += prob;
    }
    const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
    for (std::size_t bi = 0; bi < best_idx.size(); ++bi) {
      const int i = best_idx[bi];
      p_best[flat(i, value_idx[i])] += prob;
      for (std::size_t bj = 0; bj < bi; ++bj) {
        const int j = best_idx[bj];
        joint[flat(i, value_idx[i]) * nm + flat(j, value_idx[j])] += prob;
      }
    }
  }
};

}  // namespace detail

/// Builds the advice model of a Markovian stopping instance by exact
/// enumeration of all state paths (bounded at 1e7). Ties are permitted:
/// every period holding the path maximum counts as a winner, so sum a can
/// exceed 1. Conditioning events of probability zero leave their c entries
/// at zero and flag the model as degenerate.
inline AdviceModel build_markov(const MarkovChainSpec& spec) {
  spec.validate();
  const int n = spec.horizon;
  const int ns = static_cast<int>(spec.states.size());

  double path_bound = 1.0;
  for (int i = 0; i < n; ++i) {
    path_bound *= ns;
    if (path_bound > 1e7)
      throw std::invalid_argument("build_markov: |states|^n exceeds the 1e7 path bound");
  }

  const std::vector<double> levels = markov_value_levels(spec);
  const int m = static_cast<int>(levels.size());
  std::vector<int> state_value(static_cast<std::size_t>(ns));
  for (int st = 0; st < ns; ++st) {
    state_value[static_cast<std::size_t>(st)] = static_cast<int>(
        std::lower_bound(levels.begin(), levels.end(), spec.states[static_cast<std::size_t>(st)]) -
        levels.begin());
  }

  const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  detail::MarkovAccumulator acc{n, m, std::vector<double>(nm, 0.0), std::vector<double>(nm, 0.0),
                                std::vector<double>(nm * nm, 0.0)};

  std::vector<int> path(static_cast<std::size_t>(n));
  std::vector<int> vidx(static_cast<std::size_t>(n));
  // depth-first enumeration, pruning zero-probability branches
  auto dfs = [&](auto&& self, int depth, double prob) -> void {
    if (depth == n) {
      acc.record_path(vidx, levels, prob);
      return;
    }
    for (int st = 0; st < ns; ++st) {
      const double step = depth == 0 ? spec.initial[static_cast<std::size_t>(st)]
                                     : spec.transition[static_cast<std::size_t>(
                                           path[static_cast<std::size_t>(depth - 1)])]
                                                      [static_cast<std::size_t>(st)];
      if (step == 0.0) continue;
      path[static_cast<std::size_t>(depth)] = st;
      vidx[static_cast<std::size_t>(depth)] = state_value[static_cast<std::size_t>(st)];
      self(self, depth + 1, prob * step);
    }
  };
  dfs(dfs, 0, 1.0);

  std::vector<double> c(nm * nm, 0.0);
  bool degenerate = false;
  for (std::size_t later = 0; later < nm; ++later) {
    const double denom = acc.p_best[later];
    if (denom == 0.0) {
      degenerate = true;
      continue;
    }
    for (std::size_t earlier = 0; earlier < nm; ++earlier)
      c[later * nm + earlier] = acc.joint[later * nm + earlier] / denom;
  }

  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(m));
  for (double v : levels) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    labels.push_back(std::move(s));
  }

  AdviceModel model = AdviceModel::custom_dense(n, SignalSet(std::move(labels)), std::move(acc.a),
                                                std::move(c), /*tie_permitting=*/true,
                                                ModelKind::markov);
  if (degenerate) model.mark_degenerate_conditioning();
  return model;
}

/// Materializes any model into dense tables (kind becomes custom). Intended
/// for cross-checking the separable fast paths against the direct recursion
/// and for perturbation audits; O(n^2 m^2) storage.
inline AdviceModel densify(const AdviceModel& model) {
  const int n = model.horizon();
  const int m = model.signal_count();
  const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  std::vector<double> a(nm), c(nm * nm, 0.0);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) labels.push_back(model.signals().label(s));
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) {
      a[model.flat(i, s)] = model.a(i, s);
      for (int j = 1; j < i; ++j)
        for (int sp = 0; sp < m; ++sp)
          c[model.flat(i, s) * nm + model.flat(j, sp)] = model.c(i, s, j, sp);
    }
  AdviceModel out = AdviceModel::custom_dense(n, SignalSet(std::move(labels)), std::move(a),
                                              std::move(c), model.tie_permitting());
  if (model.degenerate_conditioning()) out.mark_degenerate_conditioning();
  return out;
}

/// Parameter bundle for one concrete instance; mirrors the JSON model-spec
/// schema accepted by the CLI.
struct ModelSpec {
  ModelKind kind = ModelKind::classic;
  int n = 0;
  int k = 0;
  double p = 0.5;
  double p_prime = 0.5;
  std::optional<MarkovChainSpec> chain;
};

inline AdviceModel build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::classic: return build_classic(spec.n);
    case ModelKind::samples: return build_samples(spec.n, spec.k);
    case ModelKind::binary: return build_binary(spec.n, spec.p, spec.p_prime);
    case ModelKind::markov:
      if (!spec.chain) throw std::invalid_argument("build_model: markov spec needs a chain");
      return build_markov(*spec.chain);
    default: throw std::invalid_argument("build_model: unsupported kind");
  }
}

}  // namespace secretary
