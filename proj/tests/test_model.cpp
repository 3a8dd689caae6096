#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/games.hpp"
#include "core/model.hpp"
#include "test_util.hpp"

using namespace olab;
using olab_test::expect_error;

namespace {

// Matching pennies with external-regret transforms (loss 1 when f == x).
GameSpec pennies(int T) {
  return make_external({"h", "t"}, {"h", "t"}, {{1, 0}, {0, 1}}, T);
}

GameSpec scalar_game(int T, const std::vector<std::vector<double>>& loss) {
  GameSpec g;
  g.F = {"a", "b"};
  g.X = {"u", "v"};
  g.T = T;
  g.payoff.k = 1;
  for (const auto& row : loss) {
    g.payoff.values.emplace_back();
    for (double v : row) g.payoff.values.back().push_back({v});
  }
  TransformSeq id;
  id.name = "id";
  TransformStep st;
  st.map = {0, 1};
  id.steps.push_back(st);
  g.phi.seqs.push_back(id);
  return g;
}

}  // namespace

TEST_CASE("aggregator kind names") {
  Aggregator a;
  CHECK(a.kind_name() == "average");
  a.kind = Aggregator::Kind::norm_of_average;
  CHECK(a.kind_name() == "norm-of-average");
  a.kind = Aggregator::Kind::neg_norm_of_average;
  CHECK(a.kind_name() == "neg-norm-of-average");
  a.kind = Aggregator::Kind::distance_to_set;
  CHECK(a.kind_name() == "distance-to-set");
  a.kind = Aggregator::Kind::function_of_average;
  CHECK(a.kind_name() == "function-of-average");
}

TEST_CASE("subadditivity classes") {
  Aggregator a;
  CHECK(a.subadditivity() == Aggregator::Subadd::b);
  a.kind = Aggregator::Kind::norm_of_average;
  CHECK(a.subadditivity() == Aggregator::Subadd::b);
  a.kind = Aggregator::Kind::neg_norm_of_average;
  CHECK(a.subadditivity() == Aggregator::Subadd::neg_b);
  a.kind = Aggregator::Kind::distance_to_set;
  CHECK(a.subadditivity() == Aggregator::Subadd::neither);
}

TEST_CASE("validate broadcasts one-step transforms and fills names") {
  GameSpec g = scalar_game(3, {{1, 0}, {0, 1}});
  g.phi.seqs[0].name.clear();
  g.validate();
  CHECK(g.phi.seqs[0].steps.size() == 3);
  CHECK(g.phi.seqs[0].name == "phi0");
  CHECK(g.phi.time_invariant);
  CHECK(g.phi.all_departure);
  CHECK(g.radius == doctest::Approx(1.0));
}

TEST_CASE("validate derives radius from overrides too") {
  GameSpec g = scalar_game(1, {{1, 0}, {0, 1}});
  TransformSeq ov;
  ov.name = "big";
  TransformStep st;
  st.kind = TransformStep::Kind::payoff_override;
  st.table = {{{3.0}, {0.0}}, {{0.0}, {0.0}}};
  ov.steps.push_back(st);
  g.phi.seqs.push_back(ov);
  g.validate();
  CHECK(g.radius == doctest::Approx(3.0));
  CHECK_FALSE(g.phi.all_departure);
}

TEST_CASE("work_norm follows the aggregator") {
  GameSpec g = scalar_game(1, {{1, 0}, {0, 1}});
  g.validate();
  CHECK(g.work_norm().kind == NormSpec::Kind::l2);
  g.agg.kind = Aggregator::Kind::norm_of_average;
  g.agg.norm = NormSpec{NormSpec::Kind::l1, 1.0};
  CHECK(g.work_norm().kind == NormSpec::Kind::l1);
}

TEST_CASE("aggregate: average and norms") {
  Aggregator avg;
  CHECK(aggregate(avg, {{1.0}, {0.0}, {0.5}}) == doctest::Approx(0.5));
  CHECK(aggregate(avg, {}) == 0.0);

  Aggregator nrm;
  nrm.kind = Aggregator::Kind::norm_of_average;
  nrm.norm = NormSpec{NormSpec::Kind::l2, 2.0};
  // average of (1,0) and (0,1) is (1/2,1/2); l2 norm = sqrt(1/2)
  CHECK(aggregate(nrm, {{1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(std::sqrt(0.5)));

  Aggregator dist;
  dist.kind = Aggregator::Kind::distance_to_set;
  dist.norm = NormSpec{NormSpec::Kind::l2, 2.0};
  dist.target.vertices = {{0.0, 0.0}};
  CHECK(aggregate(dist, {{1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(std::sqrt(0.5)));
  // Distance to a segment: average (1/2,1/2) lies on hull{(0,0),(1,1)}.
  dist.target.vertices = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK(aggregate(dist, {{1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("regret_of_history: external pennies") {
  GameSpec g = pennies(2);
  // Played (h,h) then (t,t): losses 1,1. Constant departures average 1/2 each.
  const History h = {{0, 0}, {1, 1}};
  CHECK(regret_of_history(g, h) == doctest::Approx(0.5));
  // Played (h,t) then (t,h): losses 0,0; benchmark min is also 1/2 -> regret -1/2.
  const History h2 = {{0, 1}, {1, 0}};
  CHECK(regret_of_history(g, h2) == doctest::Approx(-0.5));
}

TEST_CASE("regret_of_history with identity transform is zero") {
  GameSpec g = scalar_game(2, {{0.3, 0.9}, {0.6, 0.1}});
  g.validate();
  CHECK(regret_of_history(g, {{0, 1}, {1, 0}}) == doctest::Approx(0.0));
}

TEST_CASE("phi_loss reads departures and overrides") {
  GameSpec g = scalar_game(2, {{1, 0}, {0, 1}});
  TransformSeq swap;
  swap.name = "swap";
  TransformStep st;
  st.map = {1, 0};
  swap.steps.push_back(st);
  g.phi.seqs.push_back(swap);
  TransformSeq ov;
  ov.name = "ov";
  TransformStep so;
  so.kind = TransformStep::Kind::payoff_override;
  so.table = {{{0.25}, {0.25}}, {{0.75}, {0.75}}};
  ov.steps.push_back(so);
  g.phi.seqs.push_back(ov);
  g.validate();
  CHECK(g.phi_loss(g.phi.seqs[1], 0, 0, 0)[0] == doctest::Approx(0.0));  // swapped to f=1
  CHECK(g.phi_loss(g.phi.seqs[2], 1, 0, 1)[0] == doctest::Approx(0.25));
}

TEST_CASE("validation rejects malformed games") {
  expect_error(errc::invalid, "must be nonempty", [] {
    GameSpec g;
    g.X = {"x"};
    g.T = 1;
    g.validate();
  });
  expect_error(errc::invalid, "duplicate label", [] {
    GameSpec g = scalar_game(1, {{0, 0}, {0, 0}});
    g.F = {"a", "a"};
    g.validate();
  });
  expect_error(errc::invalid, "horizon T", [] {
    GameSpec g = scalar_game(0, {{0, 0}, {0, 0}});
    g.validate();
  });
  expect_error(errc::invalid, "payoff row", [] {
    GameSpec g = scalar_game(1, {{0, 0}, {0}});
    g.validate();
  });
  expect_error(errc::invalid, "requires payoff dimension k=1", [] {
    GameSpec g = scalar_game(1, {{0, 0}, {0, 0}});
    g.payoff.k = 2;
    g.payoff.values = {{{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}};
    g.validate();
  });
  expect_error(errc::invalid, "expected 1 or T=3", [] {
    GameSpec g = scalar_game(3, {{0, 0}, {0, 0}});
    TransformStep st;
    st.map = {0, 1};
    g.phi.seqs[0].steps = {st, st};
    g.validate();
  });
  expect_error(errc::invalid, "departure map", [] {
    GameSpec g = scalar_game(1, {{0, 0}, {0, 0}});
    g.phi.seqs[0].steps[0].map = {0, 5};
    g.validate();
  });
  expect_error(errc::invalid, "transform set must be nonempty", [] {
    GameSpec g = scalar_game(1, {{0, 0}, {0, 0}});
    g.phi.seqs.clear();
    g.validate();
  });
  expect_error(errc::invalid, "duplicate transform name", [] {
    GameSpec g = scalar_game(1, {{0, 0}, {0, 0}});
    g.phi.seqs.push_back(g.phi.seqs[0]);
    g.validate();
  });
  expect_error(errc::invalid, "nonempty target", [] {
    GameSpec g = scalar_game(1, {{0, 0}, {0, 0}});
    g.agg.kind = Aggregator::Kind::distance_to_set;
    g.validate();
  });
}
