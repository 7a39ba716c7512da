#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "secretary/advice_model.hpp"

namespace secretary {

/// Both sides of the discrete-integration identity
///   sum_{s=u}^{v} prod_{t=a+1}^{b} (s+t)
///     = [ prod_{t=a}^{b} (v+1+t) - prod_{t=a}^{b} (u+t) ] / (b-a+1),
/// an exact integer equality for a < b, u < v.
struct DiscreteIntegralPair {
  long long lhs = 0;
  long long rhs = 0;
  bool equal() const { return lhs == rhs; }
};

namespace detail {

inline __int128 checked_product(long long lo, long long hi, long long shift) {
  __int128 prod = 1;
  for (long long t = lo; t <= hi; ++t) {
    const __int128 factor = static_cast<__int128>(shift) + t;
    const __int128 next = prod * factor;
    if (factor != 0 && next / factor != prod)
      throw std::overflow_error("discrete_integral_identity: product overflow");
    prod = next;
  }
  return prod;
}

inline long long narrow_i128(__int128 v, const char* what) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
    throw std::overflow_error(what);
  return static_cast<long long>(v);
}

}  // namespace detail

inline DiscreteIntegralPair discrete_integral_identity(long long a, long long b, long long u,
                                                       long long v) {
  if (a >= b || u >= v)
    throw std::invalid_argument("discrete_integral_identity: requires a < b and u < v");

  __int128 lhs = 0;
  for (long long s = u; s <= v; ++s) lhs += detail::checked_product(a + 1, b, s);

  const __int128 upper = detail::checked_product(a, b, v + 1);
  const __int128 lower = detail::checked_product(a, b, u);
  const __int128 rhs = (upper - lower) / (b - a + 1);

  return {detail::narrow_i128(lhs, "discrete_integral_identity: lhs exceeds 64-bit range"),
          detail::narrow_i128(rhs, "discrete_integral_identity: rhs exceeds 64-bit range")};
}

/// Closed-form greedy dual value for the samples model.
///
/// For i = n:   u(n,s) = 1/(k+1) prod_{t=1}^{n-1} (s+t)/(k+t+1).
/// For i < n:   the clipped difference between the same product and a
/// binomial sum, everything evaluated as running ratio products so that no
/// intermediate leaves [0, ~n]; binomial terms advance by their term ratio
/// instead of materialising factorials.
inline double explicit_dual_samples(int n, int k, int i, int s) {
  if (i < 1 || i > n || s < 0 || s > k)
    throw std::invalid_argument("explicit_dual_samples: index out of range");

  double prefix = 1.0 / (k + 1);
  for (int t = 1; t < i; ++t) prefix *= static_cast<double>(s + t) / (k + t + 1);
  if (i == n) return prefix;

  double head = 1.0;  // prod_{t=i}^{n-1} (s+t)/(k+t+1)
  for (int t = i; t < n; ++t) head *= static_cast<double>(s + t) / (k + t + 1);

  // term_j = C(n-i,j)/j * prod_{l=1}^{j}(k-s+l) * prod_{t=i}^{n-j-1}(s+t)
  //          / prod_{t=i}^{n-1}(k+t+1)
  const int r = n - i;
  double term = static_cast<double>(r) * (k - s + 1) / (k + n);
  for (int t = i; t <= n - 2; ++t) term *= static_cast<double>(s + t) / (k + t + 1);
  double tail = term;
  for (int j = 1; j < r; ++j) {
    term *= static_cast<double>(r - j) * j * (k - s + j + 1) /
            (static_cast<double>(j + 1) * (j + 1) * (s + n - j - 1));
    tail += term;
  }

  return std::max(0.0, prefix * (head - tail));
}

namespace detail {

/// h(s) = 1 - sum_{k=1}^{r} (1/k) C(r,k) x^k with x = (1-s)/s. The
/// quantile-space dual bracket equals s^{n-1} h(s), so h carries both the
/// sign (for root finding) and the value; term-ratio evaluation keeps it
/// stable for remaining horizons in the hundreds, and overflow to -inf still
/// has the correct sign.
inline double gm_bracket_scaled(int remaining, double s) {
  const double x = (1.0 - s) / s;
  double term = remaining * x;
  double sum = term;
  for (int k = 1; k < remaining; ++k) {
    term *= static_cast<double>(remaining - k) * k * x /
            (static_cast<double>(k + 1) * (k + 1));
    sum += term;
  }
  return 1.0 - sum;
}

}  // namespace detail

/// Quantile-space dual density of the k -> infinity limit:
///   u(n,s) = s^{n-1};  u(i,s) = max{0, s^{i-1}(s^{n-i} - binomial sum)}.
inline double gm_dual(int n, int i, double s) {
  if (i < 1 || i > n) throw std::invalid_argument("gm_dual: period out of range");
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("gm_dual: quantile outside [0,1]");
  if (i == n) return std::pow(s, n - 1);
  if (s == 0.0) return 0.0;
  const double h = detail::gm_bracket_scaled(n - i, s);
  if (h <= 0.0) return 0.0;
  return std::pow(s, n - 1) * h;
}

/// Decision numbers s*_i: s*_n = 0 and, for i < n, the root in (0,1) of the
/// bracket. The bracket is negative at 0+ and equals 1 at s = 1, so plain
/// bisection (to 1e-12) always has a bracket.
inline std::vector<double> gm_decision_numbers(int n) {
  if (n < 1) throw std::invalid_argument("gm_decision_numbers: n must be >= 1");
  std::vector<double> roots(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) {
    const int remaining = n - i;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (detail::gm_bracket_scaled(remaining, mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    roots[static_cast<std::size_t>(i - 1)] = 0.5 * (lo + hi);
  }
  return roots;
}

struct GmAsymptotics {
  double c = 0.0;
  double value = 0.0;
};

namespace detail {

inline double gm_series(double c) {
  double term = 1.0, sum = 0.0;
  for (int j = 1;; ++j) {
    term *= c / j;
    const double add = term / j;
    sum += add;
    if (add < 1e-18) break;
  }
  return sum;
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace detail

/// Gilbert-Mosteller asymptotics: c is the unique root of
/// sum_{j>=1} c^j/(j! j) = 1 (series increasing in c, truncated below
/// 1e-18), and the limit value is e^{-c} + (e^c - c - 1) int_1^inf e^{-cx}/x dx.
/// The integral is cut at X with the analytic tail bound e^{-cX}/(cX) below
/// quad_tol/2 and the remainder done by adaptive Simpson.
inline GmAsymptotics gm_asymptotic(double c_tol = 1e-10, double quad_tol = 1e-10) {
  if (c_tol <= 0.0 || quad_tol <= 0.0)
    throw std::invalid_argument("gm_asymptotic: tolerances must be positive");

  double lo = 1e-9, hi = 3.0;
  while (hi - lo > c_tol) {
    const double mid = 0.5 * (lo + hi);
    if (detail::gm_series(mid) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double c = 0.5 * (lo + hi);

  double cutoff = 2.0;
  while (std::exp(-c * cutoff) / (c * cutoff) >= 0.5 * quad_tol) cutoff *= 2.0;
  const double integral = detail::integrate(
      [c](double x) { return std::exp(-c * x) / x; }, 1.0, cutoff, 0.5 * quad_tol);

  return {c, std::exp(-c) + (std::exp(c) - c - 1.0) * integral};
}

}  // namespace secretary
