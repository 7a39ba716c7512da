#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "secretary/numeric.hpp"

namespace secretary {

enum class ModelKind { classic, samples, binary, markov, custom };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::classic: return "classic";
    case ModelKind::samples: return "samples";
    case ModelKind::binary: return "binary";
    case ModelKind::markov: return "markov";
    case ModelKind::custom: return "custom";
  }
  return "?";
}

inline std::optional<ModelKind> model_kind_from_string(std::string_view s) {
  if (s == "classic") return ModelKind::classic;
  if (s == "samples") return ModelKind::samples;
  if (s == "binary") return ModelKind::binary;
  if (s == "markov") return ModelKind::markov;
  if (s == "custom") return ModelKind::custom;
  return std::nullopt;
}

/// Ordered set of signal identifiers. The position of a label is the
/// canonical index used by every (period, signal) table in the library.
class SignalSet {
 public:
  explicit SignalSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("SignalSet: needs at least one signal");
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second)
        throw std::invalid_argument("SignalSet: duplicate label '" + l + "'");
    }
  }

  static SignalSet numeric_range(int count) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) labels.push_back(std::to_string(s));
    return SignalSet(std::move(labels));
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int idx) const { return labels_[static_cast<std::size_t>(idx)]; }
  int index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<int>(i);
    return -1;
  }

 private:
  std::vector<std::string> labels_;
};

/// Advice model: horizon n, signal set, and the LP coefficient tables
///   a(i,s)      = P[candidate i is globally best and carries signal s]
///   c(i,s,j,s') = P[T_j, s_j = s' | T_i, s_i = s]   for j < i
/// where T_i is the best-so-far event. Coefficients are either stored as a
/// dense table (markov / custom) or synthesized on demand from a separable
/// kernel (classic / samples / binary); dense storage of c is O(n^2 m^2)
/// and infeasible at large sample counts.
///
/// Models are immutable after construction and safe to share across threads.
class AdviceModel {
 public:
  /// Classic and samples models: a(s) independent of the period,
  /// c given by the insertion-process product formula.
  static AdviceModel from_samples_kernel(int n, int k, ModelKind kind) {
    if (n < 1) throw std::invalid_argument("AdviceModel: horizon must be >= 1");
    if (k < 0) throw std::invalid_argument("AdviceModel: sample count must be >= 0");
    AdviceModel m(kind, n, SignalSet::numeric_range(k + 1));
    m.samples_k_ = k;
    m.a_of_s_.resize(static_cast<std::size_t>(k) + 1);
    // a(s) = 1/(k+1) * prod_{t=1}^{n-1} (s+t)/(k+t+1); consecutive values
    // differ by the factor (s-1+n)/s, so the table is O(n+k). Chaining off
    // a subnormal predecessor would freeze the whole table at zero, so those
    // entries are recomputed from the direct product instead (which exits
    // early once it underflows: every ratio is < 1).
    auto direct = [n, k](int s) {
      double v = 1.0 / (k + 1);
      for (int t = 1; t < n && v != 0.0; ++t) v *= static_cast<double>(s + t) / (k + t + 1);
      return v;
    };
    m.a_of_s_[0] = direct(0);
    for (int s = 1; s <= k; ++s) {
      const double prev = m.a_of_s_[static_cast<std::size_t>(s) - 1];
      m.a_of_s_[static_cast<std::size_t>(s)] =
          prev >= std::numeric_limits<double>::min() ? prev * (s - 1 + n) / s : direct(s);
    }
    return m;
  }

  static AdviceModel from_binary_kernel(int n, double recall, double specificity) {
    if (n < 1) throw std::invalid_argument("AdviceModel: horizon must be >= 1");
    if (!(recall >= 0.5 && recall <= 1.0) || !(specificity >= 0.5 && specificity <= 1.0))
      throw std::invalid_argument("AdviceModel: recall/specificity must lie in [1/2, 1]");
    AdviceModel m(ModelKind::binary, n, SignalSet({"Y", "N"}));
    m.p_ = recall;
    m.p_prime_ = specificity;
    return m;
  }

  /// Dense tables. `a` has n*m entries in period-major order; `c` has
  /// (n*m)^2 entries indexed [later_flat * n*m + earlier_flat] and must be
  /// zero wherever the earlier period is not strictly before the later one.
  static AdviceModel custom_dense(int n, SignalSet signals, std::vector<double> a,
                                  std::vector<double> c, bool tie_permitting,
                                  ModelKind kind = ModelKind::custom) {
    if (n < 1) throw std::invalid_argument("AdviceModel: horizon must be >= 1");
    const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(signals.size());
    if (a.size() != nm || c.size() != nm * nm)
      throw std::invalid_argument("AdviceModel: dense table dimensions mismatch");
    AdviceModel m(kind, n, std::move(signals));
    m.a_dense_ = std::move(a);
    m.c_dense_ = std::move(c);
    m.tie_permitting_ = tie_permitting;
    return m;
  }

  int horizon() const { return n_; }
  const SignalSet& signals() const { return signals_; }
  int signal_count() const { return signals_.size(); }
  ModelKind kind() const { return kind_; }
  bool tie_permitting() const { return tie_permitting_; }

  bool has_samples_kernel() const { return samples_k_ >= 0; }
  int sample_count() const { return samples_k_; }
  bool has_binary_kernel() const { return p_ >= 0.0; }
  double recall() const { return p_; }
  double specificity() const { return p_prime_; }

  /// Set by the markov builder when some conditioning event P[T_i, s_i=s]
  /// has probability zero; the corresponding c entries are zero.
  bool degenerate_conditioning() const { return degenerate_conditioning_; }
  void mark_degenerate_conditioning() { degenerate_conditioning_ = true; }

  std::size_t flat(int i, int s) const {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(signals_.size()) +
           static_cast<std::size_t>(s);
  }

  double a(int i, int s) const {
    if (has_samples_kernel()) return a_of_s_[static_cast<std::size_t>(s)];
    if (has_binary_kernel()) return s == 0 ? p_ / n_ : (1.0 - p_) / n_;
    return a_dense_[flat(i, s)];
  }

  /// c(i,s,j,s') with (i,s) the later period/signal and (j,s') the earlier
  /// one. Exactly 0 whenever j >= i or j < 1.
  double c(int i, int s, int j, int s_prime) const {
    if (j < 1 || j >= i || i > n_) return 0.0;
    if (has_samples_kernel()) {
      if (s_prime > s) return 0.0;
      double v = 1.0 / (s + 1);
      for (int t = 1; t < j; ++t) v *= static_cast<double>(s_prime + t) / (s + t + 1);
      return v;
    }
    if (has_binary_kernel())
      return s_prime == 0 ? (1.0 - p_prime_) / j : p_prime_ / j;
    const std::size_t nm = static_cast<std::size_t>(n_) * static_cast<std::size_t>(signals_.size());
    return c_dense_[flat(i, s) * nm + flat(j, s_prime)];
  }

 private:
  AdviceModel(ModelKind kind, int n, SignalSet signals)
      : kind_(kind), n_(n), signals_(std::move(signals)) {}

  ModelKind kind_;
  int n_;
  SignalSet signals_;
  bool tie_permitting_ = false;
  bool degenerate_conditioning_ = false;

  int samples_k_ = -1;
  std::vector<double> a_of_s_;

  double p_ = -1.0, p_prime_ = -1.0;

  std::vector<double> a_dense_;
  std::vector<double> c_dense_;
};

/// Dual LP solution: u(i,s) >= 0 with objective sum_{i,s} u(i,s).
struct DualSolution {
  int n = 0, m = 0;
  std::vector<double> u;
  double objective = 0.0;

  double at(int i, int s) const {
    return u[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(s)];
  }
};

/// Primal LP solution: z(i,s) in [0,1] with objective sum z(i,s) a(i,s).
struct PrimalSolution {
  int n = 0, m = 0;
  std::vector<double> z;
  double objective = 0.0;

  double at(int i, int s) const {
    return z[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(s)];
  }
};

/// Earliest acceptance period per signal; n+1 means "never accept".
struct ThresholdPolicy {
  int n = 0, m = 0;
  std::vector<int> t;

  int at(int s) const { return t[static_cast<std::size_t>(s)]; }
};

/// Acceptance probabilities q(i,s), applied only when the current candidate
/// is best-so-far.
struct MemorylessPolicy {
  int n = 0, m = 0;
  std::vector<double> q;

  double at(int i, int s) const {
    return q[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
             static_cast<std::size_t>(s)];
  }
};

struct ValidationIssue {
  std::string constraint;  // "a_range" | "c_range" | "row_sum" | "a_total"
  int i = 0;
  int s = -1;
  int j = -1;
  int s_prime = -1;
  double magnitude = 0.0;
  std::string message;
};

using ValidationReport = std::vector<ValidationIssue>;

namespace detail {

constexpr double kStructuralTol = 1e-12;  // per-entry checks
constexpr double kAggregateTol = 1e-9;    // whole-table sums

inline void check_row_sum(const AdviceModel& model, int i, int s, int j, ValidationReport& out) {
  const int m = model.signal_count();
  CompensatedSum acc;
  for (int sp = 0; sp < m; ++sp) acc.add(model.c(i, s, j, sp));
  const double total = acc.value();
  if (total > 1.0 + kStructuralTol) {
    out.push_back({"row_sum", i, s, j, -1, total,
                   "sum_{s'} c(i=" + std::to_string(i) + ",s=" + std::to_string(s) +
                       ",j=" + std::to_string(j) + ",s') = " + std::to_string(total) + " > 1"});
  }
}

}  // namespace detail

/// Checks every AdviceModel invariant and reports violations as data; an
/// empty report means the model is structurally sound. Dense models and
/// small kernel models get the exhaustive O(n^2 m^2) sweep; kernel models
/// too large for that are checked on a deterministic probe grid (ranges and
/// row sums hold for them by the closed-form construction, the probes guard
/// against regressions in the on-demand synthesis).
inline ValidationReport validate_model(const AdviceModel& model) {
  ValidationReport report;
  const int n = model.horizon();
  const int m = model.signal_count();

  CompensatedSum a_total;
  for (int i = 1; i <= n; ++i) {
    for (int s = 0; s < m; ++s) {
      const double v = model.a(i, s);
      a_total.add(v);
      if (v < -detail::kStructuralTol || v > 1.0 + detail::kStructuralTol) {
        report.push_back({"a_range", i, s, -1, -1, v,
                          "a(" + std::to_string(i) + "," + std::to_string(s) + ") = " +
                              std::to_string(v) + " outside [0,1]"});
      }
    }
  }

  const double total = a_total.value();
  if (model.tie_permitting()) {
    if (total < 1.0 - detail::kAggregateTol) {
      report.push_back({"a_total", 0, -1, -1, -1, total,
                        "sum a = " + std::to_string(total) + " below 1 for tie-permitting model"});
    }
  } else if (std::abs(total - 1.0) > detail::kAggregateTol) {
    report.push_back({"a_total", 0, -1, -1, -1, total,
                      "sum a = " + std::to_string(total) + " != 1 for tie-free model"});
  }

  const double full_cost = static_cast<double>(n) * n * m * m;
  if (full_cost <= 4e8) {
    for (int i = 1; i <= n; ++i) {
      for (int s = 0; s < m; ++s) {
        for (int j = 1; j < i; ++j) {
          detail::check_row_sum(model, i, s, j, report);
          for (int sp = 0; sp < m; ++sp) {
            const double v = model.c(i, s, j, sp);
            if (v < -detail::kStructuralTol || v > 1.0 + detail::kStructuralTol) {
              report.push_back({"c_range", i, s, j, sp, v,
                                "c(" + std::to_string(i) + "," + std::to_string(s) + "," +
                                    std::to_string(j) + "," + std::to_string(sp) + ") = " +
                                    std::to_string(v) + " outside [0,1]"});
            }
          }
        }
      }
    }
  } else {
    const int is_probe[] = {2, n / 2 + 1, n};
    const int s_probe[] = {0, m / 2, m - 1};
    for (int i : is_probe) {
      if (i < 2 || i > n) continue;
      for (int s : s_probe) {
        const int j_probe[] = {1, i / 2, i - 1};
        for (int j : j_probe) {
          if (j < 1 || j >= i) continue;
          detail::check_row_sum(model, i, s, j, report);
        }
      }
    }
  }

  return report;
}

}  // namespace secretary
