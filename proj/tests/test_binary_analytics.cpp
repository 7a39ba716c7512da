#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "secretary/binary_analytics.hpp"
#include "secretary/builders.hpp"
#include "secretary/greedy_dual.hpp"

using namespace secretary;
using Catch::Matchers::WithinAbs;

TEST_CASE("asymptotic thresholds") {
  SECTION("uninformative advice collapses both thresholds to 1/e") {
    const AsymptoticThresholds t = asymptotic_thresholds(0.5, 0.5);
    CHECK_THAT(t.t_yes_frac, WithinAbs(std::exp(-1.0), 1e-12));
    CHECK_THAT(t.t_no_frac, WithinAbs(std::exp(-1.0), 1e-12));
  }
  SECTION("reference coordinates") {
    const AsymptoticThresholds t = asymptotic_thresholds(5.0 / 9, 5.0 / 9);
    CHECK_THAT(t.t_no_frac, WithinAbs(0.4493289641172217, 1e-5));
    CHECK_THAT(t.t_yes_frac, WithinAbs(0.30069512768373236, 1e-5));
    const AsymptoticThresholds t2 = asymptotic_thresholds(0.5, 0.75);
    CHECK_THAT(t2.t_yes_frac, WithinAbs(0.20374971871270472, 1e-5));
  }
  SECTION("ordering holds across the parameter grid") {
    for (double p = 0.5; p <= 1.0001; p += 0.05)
      for (double pp = 0.5; pp <= 1.0001; pp += 0.05) {
        const AsymptoticThresholds t = asymptotic_thresholds(std::min(p, 1.0), std::min(pp, 1.0));
        CHECK(t.t_yes_frac <= t.t_no_frac + 1e-15);
      }
  }
  CHECK_THROWS_AS(asymptotic_thresholds(0.3, 0.8), std::invalid_argument);
}

TEST_CASE("asymptotic winning probability") {
  CHECK(asymptotic_ratio(1.0, 1.0) == 1.0);  // 0^0 = 1 at perfect advice
  CHECK_THAT(asymptotic_ratio(0.5, 0.5), WithinAbs(std::exp(-1.0), 1e-12));
  CHECK_THAT(asymptotic_ratio(5.0 / 9, 7.0 / 9), WithinAbs(0.3914314541059371, 1e-4));

  SECTION("symmetric case reduces to the (1/p - 1) form") {
    for (double p : {0.55, 0.65, 0.8, 0.95}) {
      const double expected = std::pow(1.0 / p - 1.0, 1.0 / p - 1.0) * std::exp(1.0 - 1.0 / p);
      CHECK_THAT(asymptotic_ratio(p, p), WithinAbs(expected, 1e-12));
    }
  }
}

TEST_CASE("finite-n reports converge to the asymptotics") {
  const int n = 10000;
  SECTION("uninformative advice behaves like the classic problem") {
    const BinaryFiniteReport rep = finite_n_binary_report(n, 0.5, 0.5);
    CHECK(std::abs(rep.t_yes / static_cast<double>(n) - std::exp(-1.0)) < 0.01 * std::exp(-1.0));
    CHECK(std::abs(rep.t_no / static_cast<double>(n) - std::exp(-1.0)) < 0.01 * std::exp(-1.0));
    const double classic_opt = solve_greedy(build_classic(n)).objective;
    CHECK(std::abs(rep.objective - classic_opt) < 0.005 * classic_opt);
  }
  SECTION("asymmetric parameters approach the threshold fractions") {
    const BinaryFiniteReport rep = finite_n_binary_report(n, 5.0 / 9, 7.0 / 9);
    const AsymptoticThresholds t = asymptotic_thresholds(5.0 / 9, 7.0 / 9);
    CHECK(std::abs(rep.t_yes / static_cast<double>(n) - t.t_yes_frac) < 0.02);
    CHECK(std::abs(rep.t_no / static_cast<double>(n) - t.t_no_frac) < 0.02);
  }
  SECTION("perfect advice") {
    const BinaryFiniteReport rep = finite_n_binary_report(n, 1.0, 1.0);
    CHECK(rep.t_yes == 1);
    CHECK(rep.objective >= 0.999);
  }
  SECTION("the linear recursion handles the n = 1e5 bound") {
    const BinaryFiniteReport rep = finite_n_binary_report(100000, 0.9, 0.9);
    const AsymptoticThresholds t = asymptotic_thresholds(0.9, 0.9);
    CHECK(std::abs(rep.t_yes / 1e5 - t.t_yes_frac) < 0.01);
    CHECK(std::abs(rep.t_no / 1e5 - t.t_no_frac) < 0.01);
  }
}

TEST_CASE("binary grid invariants") {
  const double grid[] = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const int n = 60;
  double objective[6][6];
  for (int pi = 0; pi < 6; ++pi) {
    for (int qi = 0; qi < 6; ++qi) {
      const AdviceModel model = build_binary(n, grid[pi], grid[qi]);
      const ThresholdExtraction ext = extract_thresholds(solve_greedy(model));
      REQUIRE(ext.monotonicity.all_monotone());
      REQUIRE(ext.is_threshold());
      CHECK(ext.policy->at(0) <= ext.policy->at(1));
      objective[pi][qi] = threshold_to_primal(*ext.policy, model).objective;
    }
  }
  // more accurate advice never hurts, in either parameter
  for (int pi = 0; pi < 6; ++pi)
    for (int qi = 1; qi < 6; ++qi) CHECK(objective[pi][qi] >= objective[pi][qi - 1] - 1e-12);
  for (int qi = 0; qi < 6; ++qi)
    for (int pi = 1; pi < 6; ++pi) CHECK(objective[pi][qi] >= objective[pi - 1][qi] - 1e-12);
}
