#include <catch2/catch_amalgamated.hpp>

#include "secretary/advice_model.hpp"
#include "secretary/builders.hpp"
#include "secretary/greedy_dual.hpp"
#include "test_support.hpp"

using namespace secretary;

TEST_CASE("signal sets reject duplicates and empty lists") {
  CHECK_THROWS_AS(SignalSet({}), std::invalid_argument);
  CHECK_THROWS_AS(SignalSet({"a", "b", "a"}), std::invalid_argument);
  SignalSet s({"Y", "N"});
  CHECK(s.size() == 2);
  CHECK(s.index_of("N") == 1);
  CHECK(s.index_of("missing") == -1);
}

TEST_CASE("classic model validates cleanly") {
  const AdviceModel model = build_classic(3);
  CHECK(validate_model(model).empty());
  CHECK_FALSE(model.tie_permitting());
}

TEST_CASE("constructed row-sum violation names the offending indices") {
  // n = 3 single-signal model with c(3,.,2,.) = 1.5
  const int n = 3;
  std::vector<double> a(3, 1.0 / 3);
  std::vector<double> c(9, 0.0);
  c[1 * 3 + 0] = 1.0;  // c(2,.,1,.)
  c[2 * 3 + 0] = 1.0;  // c(3,.,1,.)
  c[2 * 3 + 1] = 1.5;  // c(3,.,2,.) -- violates Eq. row-sum bound and range
  const AdviceModel model =
      AdviceModel::custom_dense(n, SignalSet({"0"}), std::move(a), std::move(c), false);

  const ValidationReport report = validate_model(model);
  REQUIRE_FALSE(report.empty());
  bool named = false;
  for (const auto& issue : report)
    if (issue.constraint == "row_sum" && issue.i == 3 && issue.j == 2) named = true;
  CHECK(named);
}

TEST_CASE("counterexample markov model validates with tie-permitting mass exactly 1") {
  const AdviceModel model = build_markov(testsupport::counterexample_chain());
  CHECK(model.tie_permitting());
  CHECK(validate_model(model).empty());
  double total = 0.0;
  for (int i = 1; i <= model.horizon(); ++i)
    for (int s = 0; s < model.signal_count(); ++s) total += model.a(i, s);
  CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("lookups outside j < i are exactly zero") {
  const AdviceModel samples = build_samples(5, 2);
  CHECK(samples.c(3, 1, 3, 0) == 0.0);
  CHECK(samples.c(3, 1, 4, 0) == 0.0);
  CHECK(samples.c(2, 1, 0, 0) == 0.0);
  const AdviceModel markov = build_markov(testsupport::counterexample_chain());
  for (int i = 1; i <= 4; ++i)
    for (int j = i; j <= 4; ++j)
      CHECK(markov.c(i, 0, j, 0) == 0.0);
}

TEST_CASE("dual solution objective matches its table sum") {
  const DualSolution dual = solve_greedy(build_samples(6, 3));
  double total = 0.0;
  for (double v : dual.u) total += v;
  CHECK_THAT(dual.objective, Catch::Matchers::WithinAbs(total, 1e-12));
}

TEST_CASE("every builder output passes validation") {
  for (int n : {1, 2, 5, 9}) CHECK(validate_model(build_classic(n)).empty());
  for (int n : {1, 3, 6})
    for (int k : {0, 1, 4}) CHECK(validate_model(build_samples(n, k)).empty());
  for (double p : {0.5, 0.7, 1.0})
    for (double pp : {0.5, 0.9, 1.0}) CHECK(validate_model(build_binary(8, p, pp)).empty());
}

TEST_CASE("kernel models above the exhaustive cutoff still validate") {
  CHECK(validate_model(build_binary(20000, 0.7, 0.8)).empty());
  CHECK(validate_model(build_samples(40, 4000)).empty());
}
