#include <catch2/catch_amalgamated.hpp>

#include "secretary/builders.hpp"
#include "secretary/exact_lp.hpp"
#include "secretary/greedy_dual.hpp"
#include "secretary/numeric.hpp"
#include "test_support.hpp"

using namespace secretary;
using Catch::Matchers::WithinAbs;

TEST_CASE("greedy dual on classic n=3") {
  const DualSolution dual = solve_greedy(build_classic(3));
  CHECK_THAT(dual.at(1, 0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(dual.at(2, 0), WithinAbs(1.0 / 6, 1e-15));
  CHECK_THAT(dual.at(3, 0), WithinAbs(1.0 / 3, 1e-15));
  CHECK_THAT(dual.objective, WithinAbs(0.5, 1e-12));
  // permutation oracle: the skip-one policy wins with probability exactly 1/2
  CHECK(testsupport::oracle::classic_threshold(3, 2) == 0.5);
}

TEST_CASE("greedy dual on samples n=2,k=1") {
  const DualSolution dual = solve_greedy(build_samples(2, 1));
  CHECK_THAT(dual.at(2, 0), WithinAbs(1.0 / 6, 1e-15));
  CHECK_THAT(dual.at(2, 1), WithinAbs(1.0 / 3, 1e-15));
  CHECK_THAT(dual.at(1, 1), WithinAbs(1.0 / 6, 1e-15));
  CHECK(dual.at(1, 0) == 0.0);
  CHECK_THAT(dual.objective, WithinAbs(2.0 / 3, 1e-12));
  // six equally likely rank assignments; optimal thresholds t(0)=2, t(1)=1
  CHECK_THAT(testsupport::oracle::samples_threshold(2, 1, {2, 1}), WithinAbs(2.0 / 3, 1e-15));
}

TEST_CASE("greedy dual on the counterexample markov model") {
  const AdviceModel model = build_markov(testsupport::counterexample_chain());
  const DualSolution dual = solve_greedy(model);
  const int s2 = model.signals().index_of("2");
  const int s3 = model.signals().index_of("3");
  CHECK_THAT(dual.at(2, s2), WithinAbs(0.5, 1e-15));
  CHECK_THAT(dual.at(4, s3), WithinAbs(0.5, 1e-15));
  double rest = 0.0;
  for (int i = 1; i <= 4; ++i)
    for (int s = 0; s < 4; ++s)
      if (!((i == 2 && s == s2) || (i == 4 && s == s3))) rest += dual.at(i, s);
  CHECK(rest == 0.0);
  CHECK_THAT(dual.objective, WithinAbs(1.0, 1e-15));
}

TEST_CASE("monotonicity reports") {
  SECTION("samples duals are monotone") {
    CHECK(is_monotone(solve_greedy(build_samples(6, 2))).all_monotone());
  }
  SECTION("counterexample dual is non-monotone at signal 2") {
    const AdviceModel model = build_markov(testsupport::counterexample_chain());
    const MonotonicityReport rep = is_monotone(solve_greedy(model));
    CHECK_FALSE(rep.all_monotone());
    const auto bad = rep.violating_signals();
    REQUIRE(bad.size() == 1);
    CHECK(model.signals().label(bad[0]) == "2");
  }
  SECTION("binary duals are monotone") {
    CHECK(is_monotone(solve_greedy(build_binary(5, 0.8, 0.8))).all_monotone());
  }
}

TEST_CASE("threshold extraction") {
  SECTION("classic n=3 gives t=2") {
    const ThresholdExtraction ext = extract_thresholds(solve_greedy(build_classic(3)));
    REQUIRE(ext.is_threshold());
    CHECK(ext.policy->at(0) == 2);
  }
  SECTION("the counterexample yields the non-threshold diagnosis") {
    const AdviceModel model = build_markov(testsupport::counterexample_chain());
    const ThresholdExtraction ext = extract_thresholds(solve_greedy(model));
    CHECK_FALSE(ext.is_threshold());
    REQUIRE(ext.non_threshold_signals().size() == 1);
    CHECK(model.signals().label(ext.non_threshold_signals()[0]) == "2");
  }
  SECTION("perfect binary advice: accept Y immediately, never accept N") {
    const ThresholdExtraction ext = extract_thresholds(solve_greedy(build_binary(4, 1.0, 1.0)));
    REQUIRE(ext.is_threshold());
    CHECK(ext.policy->at(0) == 1);
    CHECK(ext.policy->at(1) == 5);  // n+1: the N-dual is identically zero
  }
}

TEST_CASE("greedy dual satisfies each constraint tightly or at zero") {
  // Case analysis behind the threshold proposition: at every (i,s) either
  // u(i,s) = 0 and the constraint holds, or u > 0 and it is tight.
  auto check_model = [](const AdviceModel& model) {
    const DualSolution dual = solve_greedy(model);
    const int n = model.horizon(), m = model.signal_count();
    for (int i = 1; i <= n; ++i)
      for (int s = 0; s < m; ++s) {
        CompensatedSum lhs;
        lhs.add(dual.at(i, s));
        for (int j = i + 1; j <= n; ++j)
          for (int sp = 0; sp < m; ++sp) lhs.add(dual.at(j, sp) * model.c(j, sp, i, s));
        const double slack = lhs.value() - model.a(i, s);
        REQUIRE(slack >= -1e-9);  // feasible
        if (dual.at(i, s) > 1e-12) REQUIRE(std::abs(slack) <= 1e-9);
      }
  };
  check_model(build_classic(8));
  check_model(build_samples(6, 3));
  check_model(build_binary(7, 0.8, 0.65));
  check_model(build_markov(testsupport::counterexample_chain()));
}

TEST_CASE("separable recursion agrees with the dense recursion entrywise") {
  for (int n = 1; n <= 8; ++n) {
    for (int k = 0; k <= 5; ++k) {
      const AdviceModel fast_model = build_samples(n, k);
      const DualSolution fast = solve_greedy(fast_model);
      const DualSolution dense = solve_greedy(densify(fast_model));
      for (std::size_t idx = 0; idx < fast.u.size(); ++idx)
        REQUIRE_THAT(fast.u[idx], WithinAbs(dense.u[idx], 1e-10));
    }
  }
  const AdviceModel b = build_binary(9, 0.85, 0.7);
  const DualSolution fast = solve_greedy(b);
  const DualSolution dense = solve_greedy(densify(b));
  for (std::size_t idx = 0; idx < fast.u.size(); ++idx)
    REQUIRE_THAT(fast.u[idx], WithinAbs(dense.u[idx], 1e-12));
}

TEST_CASE("objective is invariant under signal storage order") {
  const AdviceModel base = densify(build_samples(5, 3));
  const int n = base.horizon(), m = base.signal_count();
  const std::vector<int> perm = {2, 0, 3, 1};
  const std::size_t nm = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  std::vector<double> a(nm), c(nm * nm);
  std::vector<std::string> labels(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) labels[static_cast<std::size_t>(s)] = base.signals().label(perm[static_cast<std::size_t>(s)]);
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < m; ++s) {
      a[base.flat(i, s)] = base.a(i, perm[static_cast<std::size_t>(s)]);
      for (int j = 1; j < i; ++j)
        for (int sp = 0; sp < m; ++sp)
          c[base.flat(i, s) * nm + base.flat(j, sp)] =
              base.c(i, perm[static_cast<std::size_t>(s)], j, perm[static_cast<std::size_t>(sp)]);
    }
  const AdviceModel permuted =
      AdviceModel::custom_dense(n, SignalSet(std::move(labels)), std::move(a), std::move(c), false);
  CHECK_THAT(solve_greedy(permuted).objective, WithinAbs(solve_greedy(base).objective, 1e-12));
}

TEST_CASE("threshold stability audit accepts a generic instance") {
  const ThresholdStabilityAudit audit = audit_threshold_stability(build_classic(5), 1e-9, 7);
  CHECK(audit.both_threshold);
  CHECK(audit.stable);
}
