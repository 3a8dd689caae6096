#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/games.hpp"
#include "core/value.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {

GameSpec pennies(int T) {
  return make_external({"h", "t"}, {"h", "t"}, {{1, 0}, {0, 1}}, T);
}

// Against an i.i.d.-uniform adversary the per-round loss is 1/2 for any play
// and the best constant action loses min(N0, N1), so the average regret is
// E|S_T| / (2T) with S_T a sum of T independent signs; the uniform adversary
// is an equalizer, making this the exact game value.
double pennies_value(int T) {
  double e_abs = 0;
  for (int u = 0; u <= T; ++u) {  // u heads among T
    double logp = std::lgamma(T + 1) - std::lgamma(u + 1) - std::lgamma(T - u + 1) -
                  T * std::log(2.0);
    e_abs += std::exp(logp) * std::abs(2.0 * u - T);
  }
  return e_abs / (2.0 * T);
}

}  // namespace

TEST_CASE("external pennies: exact values match the binomial formula") {
  CHECK(pennies_value(1) == doctest::Approx(0.5));      // E|S_1|/2 = 1/2
  CHECK(pennies_value(2) == doctest::Approx(0.25));     // E|S_2| = 1
  CHECK(pennies_value(3) == doctest::Approx(0.25));     // E|S_3| = 3/2
  CHECK(pennies_value(4) == doctest::Approx(0.1875));   // E|S_4| = 3/2
  for (int T = 1; T <= 4; ++T)
    CHECK(exact_value(pennies(T)) == doctest::Approx(pennies_value(T)).epsilon(1e-9));
}

TEST_CASE("asymmetric external game: hand-solved one-round value") {
  // Equalizing mix p = 1/2 makes both columns' regret 0.25.
  GameSpec g = make_external({"a", "b"}, {"u", "v"}, {{0.2, 0.8}, {0.7, 0.3}}, 1);
  CHECK(exact_value(g) == doctest::Approx(0.25));
}

TEST_CASE("identity benchmark pins the value at zero") {
  GameSpec g = make_external({"a", "b"}, {"u", "v"}, {{0.3, 0.9}, {0.6, 0.1}}, 2);
  g.phi.seqs.clear();
  TransformSeq id;
  id.name = "id";
  TransformStep st;
  st.map = {0, 1};
  id.steps.push_back(st);
  g.phi.seqs.push_back(id);
  g.validate();
  CHECK(exact_value(g) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("collapse memoisation does not change the value") {
  GameSpec g = pennies(3);
  ValueOptions on, off;
  off.collapse = false;
  CHECK(exact_value(g, on) == doctest::Approx(exact_value(g, off)).epsilon(1e-12));
}

TEST_CASE("theta value: pennies tail probabilities") {
  GameSpec g = pennies(1);
  // One-round regret equals the realised loss in {0,1}; minimax P(loss=1) = 1/2.
  CHECK(exact_theta_value(g, 0.25) == doctest::Approx(0.5));
  CHECK(exact_theta_value(g, 2.0) == doctest::Approx(0.0));   // regret never exceeds 1
  CHECK(exact_theta_value(g, -0.5) == doctest::Approx(1.0));  // regret always exceeds -1/2
}

TEST_CASE("gamma value: identity and indicator reduce to known quantities") {
  GameSpec g = pennies(2);
  GammaSpec id;  // identity leaf transform
  CHECK(exact_gamma_value(g, id) == doctest::Approx(exact_value(g)).epsilon(1e-12));
  GammaSpec ind;
  ind.name = GammaSpec::Name::indicator;
  ind.theta = 0.25;
  CHECK(exact_gamma_value(g, ind) ==
        doctest::Approx(exact_theta_value(g, 0.25)).epsilon(1e-12));
}

TEST_CASE("gamma value: exponential-quadratic leaf on one round") {
  GameSpec g = pennies(1);
  GammaSpec ex;
  ex.name = GammaSpec::Name::exp_quadratic;
  ex.alpha = 1.0;
  ex.scale = 1.0;
  // Leaf pays exp(r^2) with r in {0,1} and minimax P(r=1) = 1/2: (1+e)/2.
  CHECK(exact_gamma_value(g, ex) == doctest::Approx((1.0 + std::exp(1.0)) / 2.0));
}

TEST_CASE("budget guard trips on tiny budgets") {
  ValueOptions o;
  o.budget = 1;
  expect_error(errc::budget, "budget", [&] { exact_value(pennies(2), o); });
}

TEST_CASE("minimax strategy extraction and best response") {
  GameSpec g = pennies(1);
  const StrategyTable s = extract_minimax_strategy(g);
  REQUIRE(s.count(History{}) == 1);
  CHECK(s.at(History{})[0] == doctest::Approx(0.5));
  // The extracted table guarantees the game value against any adversary.
  CHECK(best_response_value(g, s) == doctest::Approx(0.5).epsilon(1e-9));

  GameSpec g3 = pennies(3);
  const StrategyTable s3 = extract_minimax_strategy(g3);
  CHECK(best_response_value(g3, s3) <= exact_value(g3) + 1e-9);
}

TEST_CASE("simulate: fixed policies give deterministic regrets") {
  GameSpec g = pennies(1);
  PlayerPolicy pf;
  pf.kind = PlayerPolicy::Kind::fixed;
  pf.fixed = {0};
  AdversaryPolicy af;
  af.kind = AdversaryPolicy::Kind::fixed;
  af.fixed = {0};
  const SimResult r = simulate(g, pf, af, 3, 11);
  CHECK(r.mean == doctest::Approx(1.0));  // loss 1, best departure 0
  CHECK(r.se == doctest::Approx(0.0));
  CHECK(r.regrets.size() == 3);

  af.fixed = {1};
  CHECK(simulate(g, pf, af, 2, 11).mean == doctest::Approx(0.0));
}

TEST_CASE("simulate: minimax against best response centers on the value") {
  GameSpec g = pennies(2);
  PlayerPolicy pm;
  pm.kind = PlayerPolicy::Kind::minimax;
  AdversaryPolicy ab;
  ab.kind = AdversaryPolicy::Kind::best_response;
  const SimResult r = simulate(g, pm, ab, 128, 7);
  CHECK(std::abs(r.mean - 0.25) <= 5.0 * r.se + 1e-12);
}

TEST_CASE("simulate: identical seeds reproduce, different seeds vary") {
  GameSpec g = pennies(3);
  PlayerPolicy pu;  // uniform
  AdversaryPolicy au;
  const SimResult a = simulate(g, pu, au, 16, 5);
  const SimResult b = simulate(g, pu, au, 16, 5);
  CHECK(a.regrets == b.regrets);
  const SimResult c = simulate(g, pu, au, 16, 6);
  CHECK(a.regrets != c.regrets);
}

TEST_CASE("simulate rejects best response on both sides") {
  GameSpec g = pennies(1);
  PlayerPolicy pb;
  pb.kind = PlayerPolicy::Kind::best_response;
  AdversaryPolicy ab;
  ab.kind = AdversaryPolicy::Kind::best_response;
  expect_error(errc::invalid, "best_response", [&] { simulate(g, pb, ab, 1, 1); });
}

TEST_CASE("run_episode is seed-deterministic and history_key renders it") {
  GameSpec g = pennies(3);
  PlayerPolicy pu;
  AdversaryPolicy au;
  const History a = run_episode(g, pu, au, 9);
  const History b = run_episode(g, pu, au, 9);
  CHECK(a == b);
  CHECK(a.size() == 3);
  CHECK(history_key({{0, 1}, {1, 0}}) == "0,1;1,0");
  CHECK(history_key({}) == "");
}
