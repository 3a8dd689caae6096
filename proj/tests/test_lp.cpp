#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "core/lp.hpp"
#include "core/oracle.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {
using Mat = std::vector<std::vector<double>>;
constexpr double kEps = 1e-11;
constexpr double kPureTol = 1e-9;

GameSolT<double> solve(const Mat& m) { return solve_matrix_game_t<double>(m, kEps, kPureTol); }
}  // namespace

TEST_CASE("lp_solve: bounded minimum on one variable") {
  LpProblem<double> p;
  p.n = 1;
  p.c = {-1.0};
  p.a_le = {{1.0}};
  p.b_le = {5.0};
  const auto r = lp_solve(p, kEps);
  REQUIRE(r.status == lp_status::optimal);
  CHECK(r.x[0] == doctest::Approx(5.0));
  CHECK(r.objective == doctest::Approx(-5.0));
}

TEST_CASE("lp_solve: infeasible equality is reported") {
  LpProblem<double> p;
  p.n = 1;
  p.c = {0.0};
  p.a_eq = {{1.0}};
  p.b_eq = {-2.0};  // x == -2 contradicts x >= 0
  CHECK(lp_solve(p, kEps).status == lp_status::infeasible);
}

TEST_CASE("lp_solve: unbounded direction is reported") {
  LpProblem<double> p;
  p.n = 1;
  p.c = {-1.0};
  CHECK(lp_solve(p, kEps).status == lp_status::unbounded);
}

TEST_CASE("lp_solve: two-variable vertex optimum") {
  // minimize -(x + y) s.t. x + 2y <= 4, 3x + y <= 6: optimum at (8/5, 6/5).
  LpProblem<double> p;
  p.n = 2;
  p.c = {-1.0, -1.0};
  p.a_le = {{1.0, 2.0}, {3.0, 1.0}};
  p.b_le = {4.0, 6.0};
  const auto r = lp_solve(p, kEps);
  REQUIRE(r.status == lp_status::optimal);
  CHECK(r.x[0] == doctest::Approx(1.6));
  CHECK(r.x[1] == doctest::Approx(1.2));
  CHECK(r.objective == doctest::Approx(-2.8));
}

TEST_CASE("matching pennies: value 0, uniform mixes") {
  const auto s = solve({{1, -1}, {-1, 1}});
  CHECK(s.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s.row_mix[0] == doctest::Approx(0.5));
  CHECK(s.row_mix[1] == doctest::Approx(0.5));
  CHECK(s.col_mix[0] == doctest::Approx(0.5));
  CHECK(s.col_mix[1] == doctest::Approx(0.5));
}

TEST_CASE("asymmetric 2x2: hand-solved equalizing mixes") {
  // Row mix p on row 0 equalizes 0.7-0.5p and 0.3+0.5p at p=0.4, value 0.5;
  // the column side equalizes at q=0.5.
  const auto s = solve({{0.2, 0.8}, {0.7, 0.3}});
  CHECK(s.value == doctest::Approx(0.5));
  CHECK(s.row_mix[0] == doctest::Approx(0.4));
  CHECK(s.row_mix[1] == doctest::Approx(0.6));
  CHECK(s.col_mix[0] == doctest::Approx(0.5));
  CHECK(s.col_mix[1] == doctest::Approx(0.5));
}

TEST_CASE("saddle point resolves to the earliest optimal pure pair") {
  const auto s = solve({{1, 2}, {3, 4}});
  CHECK(s.value == doctest::Approx(2.0));
  CHECK(s.row_mix == std::vector<double>{1.0, 0.0});
  CHECK(s.col_mix == std::vector<double>{0.0, 1.0});
}

TEST_CASE("2x3 game: mixed row, pure column") {
  // max(2-2p, 1, 2p) is minimized at p=1/2 with value 1; column 1 is optimal pure.
  const auto s = solve({{0, 1, 2}, {2, 1, 0}});
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.row_mix[0] == doctest::Approx(0.5));
  CHECK(s.row_mix[1] == doctest::Approx(0.5));
  CHECK(s.col_mix == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("1x1 game is its entry") {
  const auto s = solve({{3.5}});
  CHECK(s.value == doctest::Approx(3.5));
  CHECK(s.row_mix == std::vector<double>{1.0});
  CHECK(s.col_mix == std::vector<double>{1.0});
}

TEST_CASE("row-only solver agrees with the full solver") {
  const Mat m = {{0.2, 0.8}, {0.7, 0.3}};
  const auto full = solve(m);
  const auto row = solve_matrix_game_row_t<double>(m, kEps, kPureTol);
  CHECK(row.value == doctest::Approx(full.value));
  CHECK(row.row_mix[0] == doctest::Approx(full.row_mix[0]));
  CHECK(row.col_mix.empty());
}

TEST_CASE("negative-entry games shift correctly") {
  // Shifted copy of the asymmetric game: value shifts by exactly -1.
  const auto s = solve({{-0.8, -0.2}, {-0.3, -0.7}});
  CHECK(s.value == doctest::Approx(-0.5));
  CHECK(s.row_mix[0] == doctest::Approx(0.4));
}

TEST_CASE("rational instantiation is exact") {
  using R = Rat;
  const std::vector<std::vector<R>> m = {{R(1), R(0)}, {R(0), R(1)}};
  const auto s = solve_matrix_game_t<R>(m, R(0), R(0));
  CHECK(s.value == R(1) / 2);
  CHECK(s.row_mix[0] == R(1) / 2);
  CHECK(s.col_mix[1] == R(1) / 2);
}

TEST_CASE("rational and double values agree on an asymmetric game") {
  const Mat m = {{0.25, 0.75}, {0.5, 0.125}};
  const std::vector<std::vector<Rat>> mr = {{Rat(1, 4), Rat(3, 4)}, {Rat(1, 2), Rat(1, 8)}};
  const auto sd = solve(m);
  const auto sr = solve_matrix_game_t<Rat>(mr, Rat(0), Rat(0));
  CHECK(sd.value == doctest::Approx(rat_to_double(sr.value)).epsilon(1e-12));
}

TEST_CASE("determinism: identical calls give identical bits") {
  const Mat m = {{0.3, 0.9, 0.1}, {0.8, 0.2, 0.6}, {0.4, 0.5, 0.7}};
  const auto a = solve(m);
  const auto b = solve(m);
  CHECK(a.value == b.value);
  CHECK(a.row_mix == b.row_mix);
  CHECK(a.col_mix == b.col_mix);
}

TEST_CASE("malformed matrices are rejected") {
  expect_error(errc::invalid, "at least one row", [] { solve({}); });
  expect_error(errc::invalid, "at least one column", [] { solve({{}}); });
  expect_error(errc::invalid, "share one width", [] { solve({{1, 2}, {3}}); });
}
