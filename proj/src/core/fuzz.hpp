#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace olab {

// Outcome of one property battery: `worst` is the battery's extremal
// statistic (signed margin, slack, or difference; see each battery), and
// `worst_what` names the instance attaining it.
struct BatteryReport {
  long long count = 0;
  long long failures = 0;
  double worst = 0;
  std::string worst_what;
  bool holds = false;
};

// Random games with |F|,|X| in [2,3], T in [1,3], {0,1} losses, average
// aggregator, and a random nonempty set of constant-departure transforms:
// checks exact_value <= 2 rad_exact + 1e-9. worst = max(value - 2 rad).
BatteryReport battery_triplex(long long count, std::uint64_t seed);
// The generator behind it, reusable for ad-hoc experiments.
GameSpec random_triplex_game(std::uint64_t seed, long long index);

// Random tree sets (depth <= 6, |V| <= 8, values in [-1,1]): checks
// exhaustive E max <= finite_class_bound + 1e-9. worst = max(emax - bound).
BatteryReport battery_finite_class(long long count, std::uint64_t seed);

// The deterministic 30-game fixture set for the oracle comparisons:
// |F|,|X| in [2,4], T in [1,3], rational-friendly aggregators (average /
// norm-of-average / distance under l1 or linf), identity transform included.
std::vector<GameSpec> fixture_games();

// Float LP value vs exact-rational value on the fixtures, |diff| <= 1e-8.
// worst = max |float - rational|.
BatteryReport battery_rational();

// Markov relation on the fixtures (identity transform makes regret
// pointwise nonnegative): theta_value(theta) <= value/theta + 1e-9 for
// theta in {0.1, 0.25, 0.5}. worst = max(theta_value - value/theta).
BatteryReport battery_markov();

// Exhaustive Sauer verification over binary-payoff games, |F|,|X| <= 3,
// departure transform sets of size <= 3, T <= 4. Payoff tables are enumerated
// up to row/column relabelling (the checked property is invariant under it);
// for |F| = 3 the multi-map transform sets range over identity + constant
// maps, single maps over all of them. worst = max(zero_cover - bound).
BatteryReport battery_sauer(int threads = 0);

// Random MdsSpec instances (dense trees and procedural palettes, T <= 200):
// mc_tail_report must find no valid-threshold 3-sigma violation.
// worst = max(empirical - bound - 3 se) over valid thresholds.
BatteryReport battery_tail(long long specs, long long samples, std::uint64_t seed,
                           int threads = 0);

// concavity_check for l1, l2, linf at k in {2,3,5}. worst = min slack.
BatteryReport battery_concavity(long long trials, std::uint64_t seed);

// Exhaustive encoding equivalence: regret_of_history(make_adaptive_game)
// equals adaptive_regret on every history, |F|=|X|=2, |Psi| <= 2, T <= 3,
// losses over {0, 1/2, 1}. worst = max |difference|.
BatteryReport battery_adaptive_encoding();

}  // namespace olab
