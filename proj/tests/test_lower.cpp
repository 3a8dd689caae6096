#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/games.hpp"
#include "core/lower.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {

GameSpec pennies(int T) {
  return make_external({"h", "t"}, {"h", "t"}, {{1, 0}, {0, 1}}, T);
}

NormSpec l2() { return NormSpec{NormSpec::Kind::l2, 2.0}; }

const std::vector<Vec> kSigns = {{1.0}, {-1.0}};

}  // namespace

TEST_CASE("stationary adversary: table shape and equalizer check") {
  GameSpec g = pennies(2);
  const StrategyTable uni = stationary_adversary(g, {0.5, 0.5});
  CHECK(uni.size() == 5);  // empty history + 4 length-1 histories
  CHECK(uni.at(History{})[0] == doctest::Approx(0.5));
  // The uniform adversary equalizes pennies; a biased one does not.
  CHECK(check_equalizer(g, uni));
  CHECK_FALSE(check_equalizer(g, stationary_adversary(g, {0.9, 0.1})));
}

TEST_CASE("equalizer check requires a complete table") {
  GameSpec g = pennies(2);
  StrategyTable partial = stationary_adversary(g, {0.5, 0.5});
  partial.erase(History{{0, 0}});
  expect_error(errc::invalid, "missing history", [&] { check_equalizer(g, partial); });
}

TEST_CASE("rademacher tree sup: hand cases") {
  // Two opposite rows, one column: E max(eps, -eps) = 1.
  CHECK(rademacher_tree_sup({{1.0}, {-1.0}}, 1) == doctest::Approx(1.0));
  // A second column cannot help: values are already extreme.
  CHECK(rademacher_tree_sup({{1.0, 0.5}, {-1.0, -0.5}}, 1) == doctest::Approx(1.0));
  // Single row: expectation of a sign, zero.
  CHECK(rademacher_tree_sup({{1.0}}, 4) == doctest::Approx(0.0));
  expect_error(errc::invalid, "nonempty", [] { rademacher_tree_sup({}, 1); });
  expect_error(errc::budget, "budget", [] {
    rademacher_tree_sup({{1.0, -1.0}, {-1.0, 1.0}}, 60, 100);
  });
}

TEST_CASE("supervised lower bound: hand values") {
  CHECK(supervised_lower({{1.0}, {-1.0}}, 1) == doctest::Approx(1.0));
  CHECK(supervised_lower({{0.5}, {-0.5}}, 1) == doctest::Approx(0.5));
  CHECK(supervised_lower({{1.0, -1.0}}, 2) == doctest::Approx(0.0));
  expect_error(errc::invalid, "[-1,1]", [] { supervised_lower({{2.0}}, 1); });
}

TEST_CASE("supervised game dominates its lower bound") {
  const std::vector<std::vector<double>> fvals = {{1.0, -1.0}, {-1.0, 1.0}};
  GameSpec g = make_supervised_game({"z0", "z1"}, fvals, 2);
  CHECK(g.X.size() == 4);  // instance points crossed with {+1,-1} labels
  CHECK(exact_value(g) >= supervised_lower(fvals, 2) - 1e-9);
}

TEST_CASE("linear lower bound and companion game") {
  const std::vector<Vec> fs = {{1.0, 0.0}, {0.0, 1.0}};
  const std::vector<Vec> xs = {{1.0, 0.0}, {0.0, 1.0}};
  CHECK(linear_lower(fs, xs, 1) == doctest::Approx(0.5));
  GameSpec g = make_linear_game(fs, xs, 1);
  CHECK(g.X.size() == 4);  // symmetrized to X and -X
  CHECK(exact_value(g) >= linear_lower(fs, xs, 1) - 1e-9);
  expect_error(errc::invalid, "share one dimension",
               [] { linear_lower({{1.0}, {1.0, 2.0}}, {{1.0}}, 1); });
}

TEST_CASE("walsh-paley sup: sign sequence by hand") {
  // E |(1/T) sum eps_t|: 1, 1/2, 1/2, 3/8 for T = 1..4.
  CHECK(walsh_paley_sup(kSigns, l2(), 1, WpMode::exhaustive) == doctest::Approx(1.0));
  CHECK(walsh_paley_sup(kSigns, l2(), 2, WpMode::exhaustive) == doctest::Approx(0.5));
  CHECK(walsh_paley_sup(kSigns, l2(), 3, WpMode::exhaustive) == doctest::Approx(0.5));
  CHECK(walsh_paley_sup(kSigns, l2(), 4, WpMode::exhaustive) == doctest::Approx(0.375));
}

TEST_CASE("walsh-paley greedy is a lower witness") {
  const std::vector<Vec> H = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const double ex = walsh_paley_sup(H, l2(), 3, WpMode::exhaustive);
  const double gr = walsh_paley_sup(H, l2(), 3, WpMode::greedy);
  CHECK(gr <= ex + 1e-9);
  CHECK(gr >= 0.0);
}

TEST_CASE("walsh-paley budget guard names greedy mode") {
  expect_error(errc::budget, "use greedy mode",
               [] { walsh_paley_sup(kSigns, l2(), 50, WpMode::exhaustive, 100); });
  expect_error(errc::invalid, "nonempty", [] { walsh_paley_sup({}, l2(), 1, WpMode::exhaustive); });
}

TEST_CASE("blackwell sign game: one-round value is 1") {
  GameSpec g = make_blackwell_game(kSigns, l2(), 1);
  CHECK(g.agg.kind == Aggregator::Kind::distance_to_set);
  CHECK(exact_value(g) == doctest::Approx(1.0));
}

TEST_CASE("blackwell lower check: factor-two sandwich") {
  const BlackwellLowerReport r1 = blackwell_lower_check(kSigns, l2(), 1);
  CHECK(r1.value == doctest::Approx(1.0));
  CHECK(r1.walsh_paley == doctest::Approx(1.0));
  CHECK(r1.mode_used == WpMode::exhaustive);
  CHECK(r1.holds);

  const BlackwellLowerReport r3 = blackwell_lower_check(kSigns, l2(), 3);
  CHECK(r3.walsh_paley == doctest::Approx(0.5));
  CHECK(r3.value >= 0.5 * r3.walsh_paley - 1e-9);
  CHECK(r3.holds);
}

TEST_CASE("blackwell lower check requires sign-symmetric H") {
  expect_error(errc::invalid, "closed under negation",
               [] { blackwell_lower_check({{1.0}, {0.5}}, l2(), 2); });
}
