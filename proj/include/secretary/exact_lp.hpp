#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "secretary/advice_model.hpp"
#include "secretary/numeric.hpp"

namespace secretary {

/// Canonical-form container for the factor-revealing primal:
///   max objective . z   s.t.   matrix z <= rhs,   z >= 0
/// One variable and one inequality row per (period, signal) pair.
struct DenseLP {
  int n = 0, m = 0;
  int num_vars = 0;
  int num_rows = 0;
  std::vector<double> objective;  // num_vars
  std::vector<double> matrix;     // num_rows x num_vars, row-major
  std::vector<double> rhs;        // num_rows

  std::size_t var_index(int i, int s) const {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
           static_cast<std::size_t>(s);
  }
};

class SimplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row (i,s):  z(i,s) + sum_{j<i} sum_{s'} c(i,s,j,s') z(j,s') <= 1.
inline DenseLP build_primal_lp(const AdviceModel& model) {
  const int n = model.horizon();
  const int m = model.signal_count();
  const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  if (nm > 5000) throw std::invalid_argument("build_primal_lp: n*m exceeds the 5000-variable bound");

  DenseLP lp;
  lp.n = n;
  lp.m = m;
  lp.num_vars = static_cast<int>(nm);
  lp.num_rows = static_cast<int>(nm);
  lp.objective.resize(nm);
  lp.matrix.assign(nm * nm, 0.0);
  lp.rhs.assign(nm, 1.0);

  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) {
      const std::size_t row = lp.var_index(i, s);
      lp.objective[row] = model.a(i, s);
      lp.matrix[row * nm + row] = 1.0;
      for (int j = 1; j < i; ++j)
        for (int sp = 0; sp < m; ++sp)
          lp.matrix[row * nm + lp.var_index(j, sp)] += model.c(i, s, j, sp);
    }
  return lp;
}

/// Dense tableau simplex, maximization, Bland's least-index rule for
/// anti-cycling, pivot tolerance 1e-9. The all-slack basis is feasible
/// because rhs = 1 >= 0, so no phase-1 is needed. Throws SimplexError after
/// 10*(rows+cols) pivots without termination; never returns a suboptimal
/// point silently.
inline PrimalSolution solve_simplex(const DenseLP& lp) {
  constexpr double kPivotTol = 1e-9;
  const int rows = lp.num_rows;
  const int nv = lp.num_vars;
  const int width = nv + rows + 1;  // structural + slack + rhs

  std::vector<double> tab(static_cast<std::size_t>(rows) * width, 0.0);
  std::vector<double> cost(static_cast<std::size_t>(width), 0.0);  // reduced costs; cost[width-1] = -objective
  std::vector<int> basis(static_cast<std::size_t>(rows));

  for (int r = 0; r < rows; ++r) {
    double* row = &tab[static_cast<std::size_t>(r) * width];
    for (int j = 0; j < nv; ++j) row[j] = lp.matrix[static_cast<std::size_t>(r) * nv + j];
    row[nv + r] = 1.0;
    row[width - 1] = lp.rhs[static_cast<std::size_t>(r)];
    basis[static_cast<std::size_t>(r)] = nv + r;
  }
  for (int j = 0; j < nv; ++j) cost[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)];

  const long pivot_limit = 10L * (rows + nv + rows);
  long pivots = 0;
  while (true) {
    int enter = -1;
    for (int j = 0; j < width - 1; ++j)
      if (cost[static_cast<std::size_t>(j)] > kPivotTol) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double coef = tab[static_cast<std::size_t>(r) * width + enter];
      if (coef <= kPivotTol) continue;
      const double ratio = tab[static_cast<std::size_t>(r) * width + width - 1] / coef;
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio &&
           basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw SimplexError("solve_simplex: unbounded direction (malformed LP)");

    if (++pivots > pivot_limit)
      throw SimplexError("solve_simplex: no termination after " + std::to_string(pivot_limit) +
                         " pivots");

    double* prow = &tab[static_cast<std::size_t>(leave) * width];
    const double piv = prow[enter];
    for (int j = 0; j < width; ++j) prow[j] /= piv;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      double* row = &tab[static_cast<std::size_t>(r) * width];
      const double f = row[enter];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
    }
    const double cf = cost[static_cast<std::size_t>(enter)];
    for (int j = 0; j < width; ++j) cost[static_cast<std::size_t>(j)] -= cf * prow[j];
    cost[static_cast<std::size_t>(enter)] = 0.0;
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  PrimalSolution sol{lp.n, lp.m, std::vector<double>(static_cast<std::size_t>(nv), 0.0), 0.0};
  for (int r = 0; r < rows; ++r)
    if (basis[static_cast<std::size_t>(r)] < nv)
      sol.z[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] =
          tab[static_cast<std::size_t>(r) * width + width - 1];
  sol.objective = -cost[static_cast<std::size_t>(width - 1)];
  return sol;
}

/// Rows listed as coefficient/rhs pairs, for external cross-checking.
inline std::string dump_lp(const DenseLP& lp) {
  std::string out;
  char buf[64];
  out += "maximize";
  for (int j = 0; j < lp.num_vars; ++j) {
    std::snprintf(buf, sizeof buf, " %+.17g z%d", lp.objective[static_cast<std::size_t>(j)], j);
    out += buf;
  }
  out += "\nsubject to\n";
  for (int r = 0; r < lp.num_rows; ++r) {
    std::snprintf(buf, sizeof buf, "row %d:", r);
    out += buf;
    for (int j = 0; j < lp.num_vars; ++j) {
      const double v = lp.matrix[static_cast<std::size_t>(r) * lp.num_vars + j];
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, " %+.17g z%d", v, j);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, " <= %.17g\n", lp.rhs[static_cast<std::size_t>(r)]);
    out += buf;
  }
  out += "z >= 0\n";
  return out;
}

struct SlacknessViolation {
  char side;  // 'P' primal row not tight, 'D' dual row not tight, 'O' objective gap
  int i = 0, s = -1;
  double amount = 0.0;
};

struct SlacknessReport {
  std::vector<SlacknessViolation> violations;
  double objective_gap = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Checks, at tolerance tol:
///   (a) u(i,s) > tol  =>  primal row (i,s) is tight,
///   (b) z(i,s) > tol  =>  dual row (i,s) is tight,
///   (c) primal and dual objectives agree.
inline SlacknessReport verify_complementary_slackness(const PrimalSolution& primal,
                                                      const DualSolution& dual,
                                                      const AdviceModel& model, double tol) {
  SlacknessReport report;
  const int n = model.horizon();
  const int m = model.signal_count();

  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) {
      if (dual.at(i, s) > tol) {
        CompensatedSum lhs;
        lhs.add(primal.at(i, s));
        for (int j = 1; j < i; ++j)
          for (int sp = 0; sp < m; ++sp) lhs.add(primal.at(j, sp) * model.c(i, s, j, sp));
        const double slack = 1.0 - lhs.value();
        if (std::abs(slack) > tol) report.violations.push_back({'P', i, s, slack});
      }
      if (primal.at(i, s) > tol) {
        CompensatedSum lhs;
        lhs.add(dual.at(i, s));
        for (int j = i + 1; j <= n; ++j)
          for (int sp = 0; sp < m; ++sp) lhs.add(dual.at(j, sp) * model.c(j, sp, i, s));
        const double slack = lhs.value() - model.a(i, s);
        if (std::abs(slack) > tol) report.violations.push_back({'D', i, s, slack});
      }
    }

  report.objective_gap = primal.objective - dual.objective;
  if (std::abs(report.objective_gap) > tol)
    report.violations.push_back({'O', 0, -1, report.objective_gap});
  return report;
}

}  // namespace secretary
