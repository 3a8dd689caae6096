#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/games.hpp"
#include "core/value.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {

PayoffTable sign_payoffs() {
  // Scalar sign game: F = {-1,+1}, X = {-1,+1}, payoff f*x.
  PayoffTable p;
  p.k = 1;
  p.values = {{{1.0}, {-1.0}}, {{-1.0}, {1.0}}};
  return p;
}

TargetSet origin() {
  TargetSet s;
  s.vertices = {{0.0}};
  return s;
}

NormSpec l2() { return NormSpec{NormSpec::Kind::l2, 2.0}; }
NormSpec l1() { return NormSpec{NormSpec::Kind::l1, 1.0}; }

CalibrationTranscript transcript(int k, std::vector<Vec> f, std::vector<int> x) {
  CalibrationTranscript t;
  t.k = k;
  t.forecasts = std::move(f);
  t.outcomes = std::move(x);
  t.validate();
  return t;
}

}  // namespace

TEST_CASE("make_external structure") {
  GameSpec g = make_external({"h", "t"}, {"h", "t"}, {{1, 0}, {0, 1}}, 2);
  CHECK(g.phi.seqs.size() == 2);
  CHECK(g.phi.seqs[0].name == "to:h");
  CHECK(g.phi.seqs[1].name == "to:t");
  CHECK(g.phi.all_departure);
  CHECK(g.phi.time_invariant);
  CHECK(g.agg.kind == Aggregator::Kind::average);
}

TEST_CASE("make_phi_regret families") {
  const std::vector<std::vector<double>> loss = {{1, 0}, {0, 1}};
  GameSpec internal = make_phi_regret({"a", "b"}, {"u", "v"}, loss, PhiFamily::internal, {}, 1);
  CHECK(internal.phi.seqs.size() == 3);  // id + 2 single-action redirects
  CHECK(internal.phi.seqs[0].name == "id");
  CHECK(exact_value(internal) == doctest::Approx(0.5));

  GameSpec swap = make_phi_regret({"a", "b"}, {"u", "v"}, loss, PhiFamily::swap_all, {}, 1);
  CHECK(swap.phi.seqs.size() == 4);  // 2^2 self-maps

  GameSpec expl =
      make_phi_regret({"a", "b"}, {"u", "v"}, loss, PhiFamily::explicit_list, {{1, 1}}, 1);
  CHECK(expl.phi.seqs.size() == 1);

  expect_error(errc::budget, "swap transform family", [&] {
    std::vector<std::string> big;
    for (int i = 0; i < 12; ++i) big.push_back("a" + std::to_string(i));
    std::vector<std::vector<double>> zero(12, std::vector<double>(2, 0.0));
    make_phi_regret(big, {"u", "v"}, zero, PhiFamily::swap_all, {}, 1);
  });
}

TEST_CASE("one-shot condition holds for the sign game at the origin") {
  const OneShotReport r = one_shot_check(sign_payoffs(), origin(), l2(), 16);
  CHECK(r.margin <= 1e-9);
  CHECK(r.certified_on_grid);
  CHECK(r.worst_p.size() == 2);
  CHECK_FALSE(r.caveat.empty());
}

TEST_CASE("one-shot condition fails for an unreachable target") {
  TargetSet far;
  far.vertices = {{1.0}};
  const OneShotReport r = one_shot_check(sign_payoffs(), far, l2(), 16);
  // Against the uniform adversary every mix averages to 0, distance 1 from {1}.
  CHECK(r.margin == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(r.certified_on_grid);
}

TEST_CASE("blackwell projection run approaches the origin") {
  const BlackwellRun r =
      run_blackwell(sign_payoffs(), origin(), l2(), 1024, BwOpponent::best_response, 0, 3);
  CHECK(r.final_distance <= 3.0 / std::sqrt(1024.0));
  REQUIRE(!r.trace.empty());
  CHECK(r.trace.back().t == 1024);
  CHECK(r.trace.back().value == doctest::Approx(r.final_distance));

  const BlackwellRun again =
      run_blackwell(sign_payoffs(), origin(), l2(), 1024, BwOpponent::best_response, 0, 3);
  CHECK(again.final_distance == r.final_distance);  // seed-deterministic

  const BlackwellRun uni =
      run_blackwell(sign_payoffs(), origin(), l2(), 512, BwOpponent::uniform, 0, 7);
  CHECK(uni.final_distance <= 1.0);
}

TEST_CASE("blackwell player object tracks its average") {
  BlackwellPlayer pl(sign_payoffs(), origin(), l2());
  CHECK(pl.distance() == doctest::Approx(0.0));
  pl.observe(0, 0);  // payoff +1
  CHECK(pl.average() == Vec{1.0});
  CHECK(pl.distance() == doctest::Approx(1.0));
  pl.observe(0, 1);  // payoff -1; average back to 0
  CHECK(pl.distance() == doctest::Approx(0.0));
  CHECK(pl.rounds() == 2);
  const Vec mix = pl.next_mix();
  REQUIRE(mix.size() == 2);
  CHECK(mix[0] + mix[1] == doctest::Approx(1.0));
}

TEST_CASE("calibration regret: exact values on tiny transcripts") {
  // One uninformed forecast, outcome 0: error (-1/2, 1/2), l1 mass 1.
  CHECK(calibration_regret(transcript(2, {{0.5, 0.5}}, {0}), l1()) == doctest::Approx(1.0));
  // Two opposite outcomes under one forecast cancel: the rounds co-move.
  CHECK(calibration_regret(transcript(2, {{0.5, 0.5}, {0.5, 0.5}}, {0, 1}), l1()) ==
        doctest::Approx(0.0));
  // A perfect forecast has no error.
  CHECK(calibration_regret(transcript(2, {{1.0, 0.0}}, {0}), l1()) == doctest::Approx(0.0));
  // Distinct forecasts: the bad round alone carries l1 error 2 over T=2.
  CHECK(calibration_regret(transcript(2, {{1.0, 0.0}, {0.0, 1.0}}, {1, 1}), l1()) ==
        doctest::Approx(1.0));
}

TEST_CASE("calibrated forecaster: reproducible, sane transcripts") {
  const CalibRun a = run_calibrated(2, 0.2, 300, CalibOpponent::random_bits, 0, 11, 4);
  const CalibRun b = run_calibrated(2, 0.2, 300, CalibOpponent::random_bits, 0, 11, 4);
  CHECK(a.regret == b.regret);
  CHECK(a.transcript.forecasts.size() == 300);
  CHECK(a.regret >= 0.0);
  CHECK(a.regret == doctest::Approx(calibration_regret(a.transcript, l1())).epsilon(1e-12));
  REQUIRE(!a.trace.empty());
  CHECK(a.trace.back().t == 300);

  const CalibRun c = run_calibrated(2, 0.2, 300, CalibOpponent::adaptive, 0, 11, 0);
  CHECK(c.regret >= 0.0);
  const CalibRun d = run_calibrated(2, 0.2, 120, CalibOpponent::constant, 1, 11, 0);
  CHECK(d.regret >= 0.0);
}

TEST_CASE("doubling wrapper: episode boundaries double") {
  const DoublingRun r = run_doubling(2, 40, CalibOpponent::random_bits, 0, 5, 4);
  CHECK(r.transcript.forecasts.size() == 40);
  REQUIRE(r.boundaries.size() >= 3);
  for (std::size_t i = 0; i + 1 < r.boundaries.size(); ++i)
    CHECK(r.boundaries[i] < r.boundaries[i + 1]);
  CHECK(r.regret == doctest::Approx(calibration_regret(r.transcript, l1())).epsilon(1e-12));
}

TEST_CASE("transcript CSV round trip and validation") {
  const CalibrationTranscript t = transcript(2, {{0.25, 0.75}, {1.0, 0.0}}, {1, 0});
  const CalibrationTranscript back = CalibrationTranscript::from_csv(t.to_csv());
  CHECK(back.k == 2);
  CHECK(back.outcomes == t.outcomes);
  CHECK(back.forecasts[0][1] == doctest::Approx(0.75));

  expect_error(errc::invalid, "outcome", [] {
    CalibrationTranscript bad;
    bad.k = 2;
    bad.forecasts = {{0.5, 0.5}};
    bad.outcomes = {2};
    bad.validate();
  });
  expect_error(errc::invalid, "sum", [] {
    CalibrationTranscript bad;
    bad.k = 2;
    bad.forecasts = {{0.5, 0.9}};
    bad.outcomes = {0};
    bad.validate();
  });
}

TEST_CASE("grid simplex packing properties") {
  const GridSimplex gs = make_grid_simplex(2, 0.25);
  CHECK(gs.k == 2);
  REQUIRE(!gs.points.empty());
  for (const Vec& p : gs.points) {
    CHECK(p.size() == 2);
    CHECK(p[0] + p[1] == doctest::Approx(1.0));
  }
  for (std::size_t i = 0; i < gs.points.size(); ++i)
    for (std::size_t j = i + 1; j < gs.points.size(); ++j) {
      double d = std::abs(gs.points[i][0] - gs.points[j][0]) +
                 std::abs(gs.points[i][1] - gs.points[j][1]);
      CHECK(d > 2.0 * 0.25);
    }
}

TEST_CASE("global cost game on simplex corners is matching pennies") {
  const std::vector<Vec> corners = {{1.0, 0.0}, {0.0, 1.0}};
  GameSpec g = make_global_cost(2, l2(), 1, corners, corners);
  CHECK(g.agg.kind == Aggregator::Kind::norm_of_average);
  CHECK(exact_value(g) == doctest::Approx(0.5));
}

TEST_CASE("simplex-weighted norm infima: closed forms") {
  CHECK(simplex_weighted_norm_inf({0.3, 0.7}, l1()) == doctest::Approx(0.3));
  CHECK(simplex_weighted_norm_inf({1.0, 1.0}, NormSpec{NormSpec::Kind::linf, 2.0}) ==
        doctest::Approx(0.5));  // harmonic: 1 / (1/1 + 1/1)
  CHECK(simplex_weighted_norm_inf({1.0, 1.0}, l2()) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));  // 1 / sqrt(sum 1/x_i^2)
}

TEST_CASE("concavity probe holds on standard norms") {
  const ConcavityReport r = concavity_check(l2(), 3, 2000, 1);
  CHECK(r.trials == 2000);
  CHECK(r.holds);
  CHECK(r.min_slack >= -1e-7);
}

TEST_CASE("adaptive regret: hand-computed interval maxima") {
  const std::vector<std::vector<double>> loss = {{0, 1}, {1, 0}};
  const std::vector<std::vector<int>> psi = {{0, 0}};
  // Play b against u twice: the benchmark map sends everything to a (loss 0);
  // the full interval gives (2 - 0)/2 = 1.
  CHECK(adaptive_regret(loss, {{1, 0}, {1, 0}}, psi) == doctest::Approx(1.0));
  // Optimal play: no interval beats the benchmark, best interval nets 0.
  CHECK(adaptive_regret(loss, {{0, 0}, {1, 1}}, psi) == doctest::Approx(0.0));
}

TEST_CASE("adaptive game encoding matches the direct computation") {
  const std::vector<std::vector<double>> loss = {{0, 1}, {1, 0}};
  const std::vector<std::vector<int>> psi = {{0, 0}, {1, 1}};
  GameSpec g = make_adaptive_game({"a", "b"}, {"u", "v"}, loss, psi, 3);
  const History h = {{1, 0}, {0, 0}, {1, 1}};
  CHECK(regret_of_history(g, h) == doctest::Approx(adaptive_regret(loss, h, psi)).epsilon(1e-12));
}
