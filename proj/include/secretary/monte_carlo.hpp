#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "secretary/advice_model.hpp"
#include "secretary/builders.hpp"
#include "secretary/numeric.hpp"

namespace secretary {

/// Deterministic per-trial generator. Each trial owns an independent
/// splitmix64 stream derived from (seed, trial index), so trial outcomes do
/// not depend on execution order or thread count.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    state_ = splitmix64_next(s) ^ mix64(stream * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL);
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  /// Uniform in [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) via multiply-shift.
  int next_below(int bound) {
    return static_cast<int>(
        (static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(bound)) >> 64);
  }

 private:
  std::uint64_t state_ = 0;
};

/// Uniform random ranks (1..n) via Fisher-Yates; rank n is the best.
inline std::vector<int> sample_classic(int n, TrialRng& rng) {
  std::vector<int> ranks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ranks[static_cast<std::size_t>(i)] = i + 1;
  for (int i = n - 1; i > 0; --i)
    std::swap(ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(rng.next_below(i + 1))]);
  return ranks;
}

/// Sequential-insertion instance of the samples model: a ranked pool starts
/// with the k samples, each online element drops into a uniformly random
/// gap. signal[i] counts samples below element i, best_so_far[i] says
/// whether it beat all earlier online elements, winner is the top online
/// element. Positions are 0-based periods.
struct SamplesInstance {
  std::vector<int> signal;
  std::vector<std::uint8_t> best_so_far;
  int winner = -1;
};

inline SamplesInstance sample_samples_instance(int n, int k, TrialRng& rng) {
  SamplesInstance inst;
  inst.signal.resize(static_cast<std::size_t>(n));
  inst.best_so_far.resize(static_cast<std::size_t>(n));
  std::vector<int> pool;  // -1 = sample, else online index; low rank first
  pool.reserve(static_cast<std::size_t>(n + k));
  pool.assign(static_cast<std::size_t>(k), -1);
  for (int t = 0; t < n; ++t) {
    const int gap = rng.next_below(static_cast<int>(pool.size()) + 1);
    int samples_below = 0, online_below = 0;
    for (int pos = 0; pos < gap; ++pos) {
      if (pool[static_cast<std::size_t>(pos)] < 0)
        ++samples_below;
      else
        ++online_below;
    }
    inst.signal[static_cast<std::size_t>(t)] = samples_below;
    inst.best_so_far[static_cast<std::size_t>(t)] = online_below == t ? 1 : 0;
    pool.insert(pool.begin() + gap, t);
  }
  for (int pos = static_cast<int>(pool.size()) - 1; pos >= 0; --pos) {
    if (pool[static_cast<std::size_t>(pos)] >= 0) {
      inst.winner = pool[static_cast<std::size_t>(pos)];
      break;
    }
  }
  return inst;
}

/// Random ranks plus noisy Y/N labels: the best candidate reads Y with
/// probability p, every other candidate reads Y with probability 1-p'.
struct BinaryInstance {
  std::vector<int> ranks;
  std::vector<std::uint8_t> says_yes;
};

inline BinaryInstance sample_binary_instance(int n, double p, double p_prime, TrialRng& rng) {
  BinaryInstance inst;
  inst.ranks = sample_classic(n, rng);
  inst.says_yes.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double yes_prob = inst.ranks[static_cast<std::size_t>(i)] == n ? p : 1.0 - p_prime;
    inst.says_yes[static_cast<std::size_t>(i)] = rng.next_unit() < yes_prob ? 1 : 0;
  }
  return inst;
}

/// Chain path instance; winners are all periods attaining the path maximum
/// (ties allowed). value_index refers to markov_value_levels(spec) order.
struct MarkovInstance {
  std::vector<int> value_index;
  std::vector<std::uint8_t> is_winner;
};

inline MarkovInstance sample_markov_instance(const MarkovChainSpec& spec, TrialRng& rng) {
  const int n = spec.horizon;
  const std::vector<double> levels = markov_value_levels(spec);
  MarkovInstance inst;
  inst.value_index.resize(static_cast<std::size_t>(n));
  inst.is_winner.resize(static_cast<std::size_t>(n));

  auto pick = [&rng](const std::vector<double>& dist) {
    double x = rng.next_unit();
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) {
      if (x < dist[i]) return static_cast<int>(i);
      x -= dist[i];
    }
    return static_cast<int>(dist.size()) - 1;
  };

  int state = pick(spec.initial);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i > 0) state = pick(spec.transition[static_cast<std::size_t>(state)]);
    const double v = spec.states[static_cast<std::size_t>(state)];
    values[static_cast<std::size_t>(i)] = v;
    inst.value_index[static_cast<std::size_t>(i)] = static_cast<int>(
        std::lower_bound(levels.begin(), levels.end(), v) - levels.begin());
  }
  const double path_max = *std::max_element(values.begin(), values.end());
  for (int i = 0; i < n; ++i)
    inst.is_winner[static_cast<std::size_t>(i)] = values[static_cast<std::size_t>(i)] == path_max;
  return inst;
}

struct SimulationReport {
  long long trials = 0;
  long long wins = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

using PolicyRef = std::variant<ThresholdPolicy, MemorylessPolicy>;

/// SECRETARY_THREADS caps worker threads; 0 or unset means one per core.
inline int resolve_thread_count(int requested) {
  int cap = 0;
  if (const char* env = std::getenv("SECRETARY_THREADS")) cap = std::atoi(env);
  int threads = requested > 0 ? requested : (cap > 0 ? cap : 0);
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  if (cap > 0) threads = std::min(threads, cap);
  return threads;
}

namespace detail {

inline bool accept(const ThresholdPolicy& policy, int period, int signal, TrialRng&) {
  return period >= policy.at(signal);
}

inline bool accept(const MemorylessPolicy& policy, int period, int signal, TrialRng& rng) {
  return rng.next_unit() < policy.at(period, signal);
}

template <typename Policy>
bool run_trial(const Policy& policy, const ModelSpec& spec, TrialRng& rng) {
  const int n = spec.n;
  switch (spec.kind) {
    case ModelKind::classic: {
      const std::vector<int> ranks = sample_classic(n, rng);
      int best = 0;
      for (int i = 0; i < n; ++i) {
        const int r = ranks[static_cast<std::size_t>(i)];
        if (r >= best) {
          best = r;
          if (accept(policy, i + 1, 0, rng)) return r == n;
        }
      }
      return false;
    }
    case ModelKind::samples: {
      const SamplesInstance inst = sample_samples_instance(n, spec.k, rng);
      for (int i = 0; i < n; ++i) {
        if (!inst.best_so_far[static_cast<std::size_t>(i)]) continue;
        if (accept(policy, i + 1, inst.signal[static_cast<std::size_t>(i)], rng))
          return i == inst.winner;
      }
      return false;
    }
    case ModelKind::binary: {
      const BinaryInstance inst = sample_binary_instance(n, spec.p, spec.p_prime, rng);
      int best = 0;
      for (int i = 0; i < n; ++i) {
        const int r = inst.ranks[static_cast<std::size_t>(i)];
        if (r >= best) {
          best = r;
          const int sig = inst.says_yes[static_cast<std::size_t>(i)] ? 0 : 1;
          if (accept(policy, i + 1, sig, rng)) return r == n;
        }
      }
      return false;
    }
    case ModelKind::markov: {
      const MarkovInstance inst = sample_markov_instance(*spec.chain, rng);
      int best_sig = -1;
      for (int i = 0; i < n; ++i) {
        const int sig = inst.value_index[static_cast<std::size_t>(i)];
        if (sig >= best_sig) {
          best_sig = sig;
          if (accept(policy, i + 1, sig, rng)) return inst.is_winner[static_cast<std::size_t>(i)];
        }
      }
      return false;
    }
    default: throw std::invalid_argument("simulate: unknown model kind");
  }
}

}  // namespace detail

/// Runs `trials` independent executions of the policy and reports the
/// winning frequency. Per-trial streams are derived from (seed, trial), so
/// the report is bit-identical across thread counts and repeated runs.
inline SimulationReport simulate(const PolicyRef& policy, const ModelSpec& spec, long long trials,
                                 std::uint64_t seed, int threads = 0) {
  if (trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  switch (spec.kind) {
    case ModelKind::classic:
    case ModelKind::samples:
    case ModelKind::binary: break;
    case ModelKind::markov:
      if (!spec.chain) throw std::invalid_argument("simulate: markov spec needs a chain");
      break;
    default: throw std::invalid_argument("simulate: no generative process for this model kind");
  }

  const int workers = std::min<long long>(resolve_thread_count(threads), trials);
  std::vector<long long> wins(static_cast<std::size_t>(workers), 0);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));

  auto run_range = [&](int w, long long lo, long long hi) {
    try {
      long long local = 0;
      std::visit(
          [&](const auto& pol) {
            for (long long t = lo; t < hi; ++t) {
              TrialRng rng(seed, static_cast<std::uint64_t>(t));
              if (detail::run_trial(pol, spec, rng)) ++local;
            }
          },
          policy);
      wins[static_cast<std::size_t>(w)] = local;
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };

  if (workers == 1) {
    run_range(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const long long chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min<long long>(trials, lo + chunk);
      pool.emplace_back(run_range, w, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  for (long long w : wins) report.wins += w;
  report.estimate = static_cast<double>(report.wins) / static_cast<double>(trials);
  report.std_error = std::sqrt(report.estimate * (1.0 - report.estimate) / static_cast<double>(trials));
  return report;
}

}  // namespace secretary
