#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/games.hpp"
#include "core/radcomp.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {

GameSpec pennies(int T) {
  return make_external({"h", "t"}, {"h", "t"}, {{1, 0}, {0, 1}}, T);
}

// E|S_T| / (2T), the interleaved complexity of the two constant benchmarks on
// {0,1} losses (see test_value.cpp for the derivation of the same quantity).
double pennies_rad(int T) {
  double e_abs = 0;
  for (int u = 0; u <= T; ++u) {
    double logp = std::lgamma(T + 1) - std::lgamma(u + 1) - std::lgamma(T - u + 1) -
                  T * std::log(2.0);
    e_abs += std::exp(logp) * std::abs(2.0 * u - T);
  }
  return e_abs / (2.0 * T);
}

LabeledTree constant_tree(int T, int f, int x) {
  LabeledTree t;
  t.T = T;
  t.nodes.assign((std::size_t{1} << T) - 1, {f, x});
  return t;
}

}  // namespace

TEST_CASE("rad_exact on external pennies matches the binomial formula") {
  for (int T = 1; T <= 4; ++T)
    CHECK(rad_exact(pennies(T), +1) == doctest::Approx(pennies_rad(T)).epsilon(1e-9));
}

TEST_CASE("sign symmetry for the average aggregator") {
  GameSpec g = pennies(3);
  CHECK(rad_exact(g, -1) == doctest::Approx(rad_exact(g, +1)).epsilon(1e-12));
}

TEST_CASE("rad_on_tree_exact: constant tree computed by hand") {
  // All nodes (h,h): the sign path scores max over the two constant departures
  // of (1/T) sum_t eps_t * loss(phi(h), h); to:h gives eps-sum * 1, to:t gives 0,
  // so each path scores max(S/T, 0) and the expectation is E max(S_T, 0) / T.
  GameSpec g = pennies(2);
  const LabeledTree t = constant_tree(2, 0, 0);
  // S_2 in {-2,0,2} with probs 1/4,1/2,1/4: E max(S,0)/2 = (1/4)*2/2 = 0.25.
  CHECK(rad_on_tree_exact(g, t, +1) == doctest::Approx(0.25));
}

TEST_CASE("tree value never exceeds the sup over trees") {
  GameSpec g = pennies(3);
  const double sup = rad_exact(g, +1);
  CHECK(rad_on_tree_exact(g, constant_tree(3, 0, 0), +1) <= sup + 1e-9);
  CHECK(rad_on_tree_exact(g, constant_tree(3, 1, 1), +1) <= sup + 1e-9);
}

TEST_CASE("exhaustive tree search reproduces rad_exact") {
  GameSpec g = pennies(2);
  const TreeSearchResult r = rad_tree_search(g, +1, 1, 0, true);
  CHECK(r.exhaustive);
  CHECK(r.value == doctest::Approx(rad_exact(g, +1)).epsilon(1e-9));
  // The reported tree must actually attain the reported value.
  CHECK(rad_on_tree_exact(g, r.tree, +1) == doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("random-restart search is a lower witness and seed-deterministic") {
  GameSpec g = pennies(3);
  const TreeSearchResult a = rad_tree_search(g, +1, 8, 42, false);
  const TreeSearchResult b = rad_tree_search(g, +1, 8, 42, false);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.value == b.value);
  CHECK(a.tree.nodes == b.tree.nodes);
  CHECK(a.value <= rad_exact(g, +1) + 1e-9);
  CHECK(rad_on_tree_exact(g, a.tree, +1) == doctest::Approx(a.value).epsilon(1e-12));
}

TEST_CASE("monte carlo on a tree: consistent, reproducible, thread-independent") {
  GameSpec g = pennies(3);
  const LabeledTree t = constant_tree(3, 0, 0);
  const double exact = rad_on_tree_exact(g, t, +1);
  const McEstimate a = rad_on_tree_mc(g, t, +1, 20000, 99, 1);
  CHECK(std::abs(a.estimate - exact) <= 5.0 * a.se + 1e-12);
  CHECK(a.se > 0);
  const McEstimate b = rad_on_tree_mc(g, t, +1, 20000, 99, 7);
  CHECK(a.estimate == b.estimate);  // chunked streams: bitwise threads-independence
  CHECK(a.se == b.se);
  const McEstimate c = rad_on_tree_mc(g, t, +1, 20000, 100, 1);
  CHECK(a.estimate != c.estimate);
}

TEST_CASE("triplex certificate on external pennies") {
  const TriplexReport r = triplex_certificate_linear(pennies(3));
  CHECK(r.val == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.rad == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.holds);
}

TEST_CASE("triplex grid decomposition sums and stays near the value") {
  const TriplexGrid g = triplex_grid_estimate(pennies(2), 4);
  CHECK(g.total == doctest::Approx(g.t1 + g.t2 + g.t3).epsilon(1e-9));
  CHECK(g.val == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("labeled tree validation") {
  GameSpec g = pennies(2);
  LabeledTree t = constant_tree(2, 0, 0);
  t.nodes.pop_back();
  expect_error(errc::invalid, "nodes", [&] { t.validate(g); });
  LabeledTree bad = constant_tree(2, 0, 0);
  bad.nodes[0] = {5, 0};
  expect_error(errc::invalid, "label", [&] { bad.validate(g); });
}

TEST_CASE("budget guard trips on tiny budgets") {
  RadOptions o;
  o.budget = 1;
  expect_error(errc::budget, "budget", [&] { rad_exact(pennies(3), +1, o); });
}
