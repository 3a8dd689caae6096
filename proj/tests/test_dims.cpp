#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/dims.hpp"
#include "core/games.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {

// Class of sign functions on two points, one function per row, presented as an
// external-style game (constant departures, average aggregator).
GameSpec sign_class(const std::vector<std::vector<double>>& rows, int T) {
  std::vector<std::string> F, X = {"u", "v"};
  for (std::size_t i = 0; i < rows.size(); ++i) F.push_back("g" + std::to_string(i));
  return make_external(F, X, rows, T);
}

LabeledTree constant_tree(int T, int f, int x) {
  LabeledTree t;
  t.T = T;
  t.nodes.assign((std::size_t{1} << T) - 1, {f, x});
  return t;
}

}  // namespace

TEST_CASE("sdim: two opposite sign functions have dimension 1") {
  GameSpec g = sign_class({{1, -1}, {-1, 1}}, 3);
  const DimResult r = sdim(g, 3);
  CHECK(r.dim == 1);
  CHECK_FALSE(r.at_cap);
  CHECK(r.text() == "1");
}

TEST_CASE("sdim: the full sign class on two points has dimension 2") {
  GameSpec g = sign_class({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, 3);
  CHECK(sdim(g, 3).dim == 2);
  const DimResult capped = sdim(g, 2);
  CHECK(capped.dim == 2);
  CHECK(capped.at_cap);
  CHECK(capped.text() == ">=2");
}

TEST_CASE("sdim rejects non-sign payoffs") {
  GameSpec g = make_external({"a", "b"}, {"u", "v"}, {{1, 0}, {0, 1}}, 2);
  expect_error(errc::invalid, "payoff values in {-1,+1}", [&] { sdim(g, 2); });
}

TEST_CASE("midpoint witness grid") {
  GameSpec g = sign_class({{1, -1}, {-1, 1}}, 2);
  CHECK(midpoint_witness_grid(g) == Vec{0.0});
  GameSpec g01 = make_external({"a", "b"}, {"u", "v"}, {{1, 0}, {0, 1}}, 2);
  CHECK(midpoint_witness_grid(g01) == Vec{0.5});
}

TEST_CASE("fat dimension at matching scales") {
  GameSpec g = sign_class({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, 3);
  const Vec grid = midpoint_witness_grid(g);
  CHECK(fat_dim(g, 1.0, grid, 3).dim == 2);
  CHECK(fat_dim(g, 2.0, grid, 3).dim == 2);   // witnesses 0: +-1 are exactly 1 away
  CHECK(fat_dim(g, 2.5, grid, 3).dim == 0);   // nothing is 1.25 from any witness
}

TEST_CASE("cover numbers on a constant tree") {
  GameSpec g = sign_class({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}, 2);
  const LabeledTree t = constant_tree(2, 0, 0);
  // At x=u the four transforms trace constants +1,+1,-1,-1: two distinct traces.
  const CoverResult zero = cover_number(CoverP::zero, 0.0, g, t);
  CHECK(zero.count == 2);
  CHECK(zero.exact);
  // One tree at 0 covers both traces in sup distance at alpha=1, not at 0.5.
  CHECK(cover_number(CoverP::inf, 1.0, g, t).count == 1);
  CHECK(cover_number(CoverP::inf, 0.5, g, t).count == 2);
}

TEST_CASE("cover numbers are monotone in the metric and in alpha") {
  GameSpec g = sign_class({{1, -1}, {-1, 1}, {1, 1}}, 2);
  LabeledTree t;
  t.T = 2;
  t.nodes = {{0, 0}, {1, 1}, {2, 0}};
  const double alpha = 0.5;
  const long long n1 = cover_number(CoverP::one, alpha, g, t).count;
  const long long n2 = cover_number(CoverP::two, alpha, g, t).count;
  const long long ni = cover_number(CoverP::inf, alpha, g, t).count;
  CHECK(n1 <= n2);
  CHECK(n2 <= ni);
  CHECK(cover_number(CoverP::inf, 0.25, g, t).count >= ni);
  CHECK(n1 >= 1);
}

TEST_CASE("max zero cover and the combinatorial cover check") {
  // 0/1 full class on two points: fat dimension 2, zero cover 4 at T=2, and
  // the bound 1 + C(2,1) + C(2,2) = 4 is met with equality.
  GameSpec g = sign_class({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 2);
  CHECK(max_zero_cover(g, 2) == 4);
  const SauerReport r = verify_sauer(g, 2);
  CHECK(r.zero_cover == 4);
  CHECK(r.d == 2);
  CHECK(r.k == 1);
  CHECK(r.bound_text == "4");
  CHECK(r.bound_approx == doctest::Approx(4.0));
  CHECK(r.holds);
}

TEST_CASE("verify_sauer on a single-function class") {
  GameSpec g = sign_class({{0, 1}}, 3);
  const SauerReport r = verify_sauer(g, 3);
  CHECK(r.zero_cover == 1);
  CHECK(r.d == 0);
  CHECK(r.bound_text == "1");
  CHECK(r.holds);
}

TEST_CASE("verify_sauer rejects non-integer payoffs") {
  GameSpec g = sign_class({{0.5, 0}, {0, 1}}, 2);
  expect_error(errc::invalid, "integer payoff values in {0..k}", [&] { verify_sauer(g, 2); });
}
