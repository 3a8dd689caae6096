#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/bounds.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {

RealTree leaf_tree(double v) {
  RealTree t;
  t.T = 1;
  t.nodes = {v};
  return t;
}

RealTree depth2(double root, double left, double right) {
  RealTree t;
  t.T = 2;
  t.nodes = {root, left, right};
  return t;
}

CoverTable table3() {
  CoverTable c;
  c.rows = {{0.25, 3.0}, {0.5, 2.0}, {1.0, 0.0}};
  return c;
}

}  // namespace

TEST_CASE("real tree validation") {
  expect_error(errc::invalid, "depth", [] { RealTree{0, {}}.validate(); });
  expect_error(errc::invalid, "needs 3 nodes", [] { RealTree{2, {1.0}}.validate(); });
  CHECK_NOTHROW(depth2(1, 2, 3).validate());
}

TEST_CASE("exact_expected_max: hand cases") {
  // Single tree {1}: E[eps * 1] = 0.
  CHECK(exact_expected_max({leaf_tree(1.0)}) == doctest::Approx(0.0));
  // Trees {+1} and {-1}: E max(eps, -eps) = 1.
  CHECK(exact_expected_max({leaf_tree(1.0), leaf_tree(-1.0)}) == doctest::Approx(1.0));
  // Depth 2, single tree (1, a, b): E[eps1 + eps2 * node] = 0 by symmetry.
  CHECK(exact_expected_max({depth2(1.0, 0.5, -0.25)}) == doctest::Approx(0.0));
}

TEST_CASE("finite_class_bound: formula on hand cases") {
  // |V|=1: log 1 = 0 gives bound 0, matching the zero expectation.
  CHECK(finite_class_bound({leaf_tree(1.0)}) == doctest::Approx(0.0));
  // |V|=2 at depth 1 with values +-1: sqrt(2 log 2).
  CHECK(finite_class_bound({leaf_tree(1.0), leaf_tree(-1.0)}) ==
        doctest::Approx(std::sqrt(2.0 * std::log(2.0))));
  // Depth 2: worst path sum of squares on (1, 1/2, -1/4) is 1 + 1/4.
  CHECK(finite_class_bound({depth2(1.0, 0.5, -0.25), depth2(0.0, 0.0, 0.0)}) ==
        doctest::Approx(std::sqrt(2.0 * std::log(2.0) * 1.25)));
}

TEST_CASE("finite_class_bound dominates exact_expected_max on mixed sets") {
  const std::vector<RealTree> v = {depth2(1.0, -0.5, 0.75), depth2(-0.25, 1.0, 0.5),
                                   depth2(0.0, 0.25, -1.0)};
  CHECK(exact_expected_max(v) <= finite_class_bound(v) + 1e-9);
}

TEST_CASE("tree sets must share one depth and be nonempty") {
  expect_error(errc::invalid, "nonempty", [] { finite_class_bound({}); });
  expect_error(errc::invalid, "common depth",
               [] { exact_expected_max({leaf_tree(1.0), depth2(1, 1, 1)}); });
}

TEST_CASE("cover table: validation and step evaluation") {
  const CoverTable c = table3();
  CHECK_NOTHROW(c.validate());
  CHECK(cover_log_at(c, 0.25) == doctest::Approx(3.0));
  CHECK(cover_log_at(c, 0.3) == doctest::Approx(2.0));  // next knot to the right
  CHECK(cover_log_at(c, 0.1) == doctest::Approx(3.0));  // before the first knot
  CHECK(cover_log_at(c, 1.0) == doctest::Approx(0.0));
  CHECK(cover_log_at(c, 2.0) == doctest::Approx(0.0));  // constant past the end

  expect_error(errc::invalid, "empty cover table", [] { CoverTable{}.validate(); });
  expect_error(errc::invalid, "strictly increasing", [] {
    CoverTable c2;
    c2.rows = {{0.5, 2.0}, {0.5, 1.0}};
    c2.validate();
  });
  expect_error(errc::invalid, "nonincreasing", [] {
    CoverTable c2;
    c2.rows = {{0.25, 1.0}, {0.5, 2.0}};
    c2.validate();
  });
  expect_error(errc::invalid, "lie in (0,1]", [] {
    CoverTable c2;
    c2.rows = {{1.5, 1.0}};
    c2.validate();
  });
}

TEST_CASE("cover table CSV round trip") {
  const CoverTable c = cover_table_from_csv("beta,log_cover\n0.5,2\n0.25,3\n1,0\n");
  REQUIRE(c.rows.size() == 3);  // rows get sorted by beta
  CHECK(c.rows[0].first == doctest::Approx(0.25));
  CHECK(c.rows[2].second == doctest::Approx(0.0));
  // Comments and blank lines are skipped.
  const CoverTable c2 = cover_table_from_csv("# comment\n\n0.5,1.0\n");
  CHECK(c2.rows.size() == 1);
  expect_error(errc::parse, "malformed number", [] { cover_table_from_csv("0.5,abc\n"); });
  expect_error(errc::parse, "expected \"beta,log_cover\"",
               [] { cover_table_from_csv("0.5 2\n0.2,1\n"); });
}

TEST_CASE("smoothness_bound: closed forms recomputed") {
  BoundParams bp;
  bp.T = 100;
  bp.card = 8;
  bp.payoff_bound = 1.0;
  bp.grad_bound = 2.0;
  bp.sigma = 0.5;
  bp.p = 2.0;
  bp.q = 1.0;
  const double finite = smoothness_bound("finite_phi", bp);
  const double want = std::pow(2.0 * 1.0 * 4.0 * std::log(8.0) * 100.0, 0.5) +
                      (0.5 * 1.0 / 2.0) * 100.0;
  CHECK(finite == doctest::Approx(want).epsilon(1e-12));

  BoundParams avg;
  avg.T = 100;
  avg.card = 8;
  avg.payoff_bound = 1.0;
  avg.gamma = 0.5;
  avg.p = 2.0;
  avg.q = 1.0;
  const double a = smoothness_bound("avg_smooth", avg);
  const double wa = std::pow(2.0 * std::log(8.0) / 100.0, 0.5) + (0.5 / 2.0) / 100.0;
  CHECK(a == doctest::Approx(wa).epsilon(1e-12));

  BoundParams two;
  two.T = 100;
  two.card = 8;
  two.payoff_bound = 1.0;
  two.gamma = 0.5;
  CHECK(smoothness_bound("two_smooth", two) ==
        doctest::Approx(2.0 * std::sqrt(0.5 * std::log(16.0) / 100.0)).epsilon(1e-12));

  BoundParams ps;
  ps.T = 100;
  ps.card = 8;
  ps.payoff_bound = 1.0;
  ps.gamma = 0.5;
  ps.p = 2.0;
  const double want_ps = 4.0 * std::pow(0.5, 0.5) * std::pow(std::log(100.0), 1.5) *
                         std::sqrt(std::log(16.0)) / std::pow(100.0, 0.5);
  CHECK(smoothness_bound("p_smooth", ps) == doctest::Approx(want_ps).epsilon(1e-12));
}

TEST_CASE("smoothness_bound: named parameter and validity errors") {
  BoundParams bp;
  bp.T = 10;
  bp.card = 4;
  expect_error(errc::invalid, "requires parameter payoff_bound",
               [&] { smoothness_bound("finite_phi", bp); });
  expect_error(errc::invalid, "unknown smoothness_bound kind",
               [&] { smoothness_bound("nope", bp); });

  BoundParams two;
  two.T = 2;
  two.card = 8;
  two.payoff_bound = 1.0;
  two.gamma = 0.5;  // floor is log(16)/0.5 ~ 5.5 > T
  expect_error(errc::invalid, "valid only for T >=", [&] { smoothness_bound("two_smooth", two); });

  BoundParams badp;
  badp.T = 10;
  badp.card = 4;
  badp.payoff_bound = 1.0;
  badp.grad_bound = 1.0;
  badp.sigma = 1.0;
  badp.p = 3.0;  // outside (1,2]
  badp.q = 1.0;
  expect_error(errc::invalid, "requires 1 < p <= 2", [&] { smoothness_bound("finite_phi", badp); });
}

TEST_CASE("dudley_bound: trapezoid integral recomputed") {
  BoundParams bp;
  bp.T = 50;
  bp.cover = table3();
  const double scale = 6.0 * std::sqrt(2.0 / 50.0);
  // tails: from 1.0: 0; from 0.5: 0.5*(sqrt2+0)/2; from 0.25: +0.25*(sqrt3+sqrt2)/2
  const double tail_50 = 0.5 * 0.5 * std::sqrt(2.0);
  const double tail_25 = tail_50 + 0.5 * 0.25 * (std::sqrt(3.0) + std::sqrt(2.0));
  const double want = std::min({4.0, 4.0 * (1.0 + 0.0), 4.0 * (0.5 + scale * tail_50),
                                4.0 * (0.25 + scale * tail_25)});
  CHECK(dudley_bound("linear_avg", bp) == doctest::Approx(want).epsilon(1e-12));

  BoundParams bg;
  bg.T = 50;
  bg.gamma = 2.0;
  bg.cover = table3();
  // two_smooth_avg with gamma = 2 matches linear_avg's scale exactly.
  CHECK(dudley_bound("two_smooth_avg", bg) == doctest::Approx(want).epsilon(1e-12));

  expect_error(errc::invalid, "unknown dudley_bound kind",
               [&] { dudley_bound("nope", bp); });
}

TEST_CASE("combinatorial_bound: exact integers") {
  CombParams cp;
  cp.T = 4;
  cp.d = 2;
  cp.k = 3;
  // sum_{i<=2} C(4,i) 3^i = 1 + 12 + 54 = 67
  const CombResult r = combinatorial_bound("sauer", cp);
  CHECK(r.is_integer);
  CHECK(r.text == "67");
  CHECK(r.approx == doctest::Approx(67.0));
  // d > T truncates at T.
  CombParams cp2;
  cp2.T = 2;
  cp2.d = 5;
  cp2.k = 1;
  CHECK(combinatorial_bound("zero_cover_sauer", cp2).text == "4");  // 1+2+1

  CombParams tr;
  tr.T = 10;
  tr.changes = 2;
  tr.n = 3;
  // C(10,2) * 3^3 = 45 * 27 = 1215
  CHECK(combinatorial_bound("tracking", tr).text == "1215");

  // A value too big for double must keep an exact decimal.
  CombParams big;
  big.T = 200;
  big.d = 100;
  big.k = 2;
  const CombResult rb = combinatorial_bound("sauer", big);
  CHECK(rb.is_integer);
  CHECK(rb.text.size() > 17);
  CHECK(rb.approx > 1e30);
}

TEST_CASE("combinatorial_bound: real-valued kinds") {
  CombParams fc;
  fc.T = 16;
  fc.fat = 3;
  fc.alpha = 0.5;
  const double want = std::pow(2.0 * std::exp(1.0) * 16.0 / 0.5, 3.0);
  CHECK(combinatorial_bound("fat_cover", fc).approx == doctest::Approx(want).epsilon(1e-12));

  CombParams bu;
  bu.T = 100;
  bu.n = 9;
  bu.alpha = 0.25;
  bu.L = 2.0;
  const double wantb = 8.0 * std::log(100.0) + 8.0 * std::log(9.0);
  CHECK(combinatorial_bound("budget", bu).approx == doctest::Approx(wantb).epsilon(1e-12));
}

TEST_CASE("combinatorial_bound: named errors") {
  CombParams cp;
  expect_error(errc::invalid, "requires integer parameter T",
               [&] { combinatorial_bound("sauer", cp); });
  cp.T = 4;
  expect_error(errc::invalid, "requires integer parameter d",
               [&] { combinatorial_bound("sauer", cp); });
  expect_error(errc::invalid, "unknown combinatorial_bound kind",
               [&] { combinatorial_bound("nope", cp); });
  CombParams ac;
  ac.T = 4;
  ac.changes = 1;
  ac.n = 2;
  expect_error(errc::invalid, "requires alpha > 0", [&] { combinatorial_bound("accum", ac); });
}
