#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "core/model.hpp"

namespace olab {

struct ValueOptions {
  long long budget = 10'000'000;  // max leaf histories an exact recursion may touch
  bool collapse = true;           // order-collapse memo when transforms repeat one step
};

// Exact minimax value by backward induction over all histories; at every
// internal node the stage game is solved as a zero-sum matrix game.
double exact_value(const GameSpec&, const ValueOptions& = {});

// Same recursion with the leaf replaced by 1{Reg > theta}: the minimax
// probability of ending with regret above theta.
double exact_theta_value(const GameSpec&, double theta, const ValueOptions& = {});

// Leaf transformations applied to the final regret.
struct GammaSpec {
  enum class Name { identity, indicator, exp_quadratic };
  Name name = Name::identity;
  double theta = 0;  // indicator threshold
  double alpha = 0;  // exp_quadratic: Gamma(r) = exp(alpha * T * r^2 / scale)
  double scale = 1;
};
double exact_gamma_value(const GameSpec&, const GammaSpec&, const ValueOptions& = {});

// Player strategy on every history of length < T (mixed action over F).
using StrategyTable = std::map<History, Vec>;

StrategyTable extract_minimax_strategy(const GameSpec&, const ValueOptions& = {});

// Value of the adversary's exact best response against a fixed player table.
double best_response_value(const GameSpec&, const StrategyTable&, const ValueOptions& = {});

struct PlayerPolicy {
  enum class Kind { minimax, uniform, fixed, table, best_response };
  Kind kind = Kind::uniform;
  std::vector<int> fixed;  // action per round
  StrategyTable table;
};

struct AdversaryPolicy {
  enum class Kind { uniform, fixed, table, best_response };
  Kind kind = Kind::uniform;
  std::vector<int> fixed;
  StrategyTable table;  // distribution over X per history
};

struct SimResult {
  double mean = 0, se = 0;
  std::vector<double> regrets;
};

// Repeated play with sampled actions. best_response policies are resolved to
// tables up front (player best_response needs a non-adaptive adversary; the two
// sides cannot both be best_response).
SimResult simulate(const GameSpec&, const PlayerPolicy&, const AdversaryPolicy&, int reps,
                   std::uint64_t seed, const ValueOptions& = {});

// One episode's realised history (for transcript-style output).
History run_episode(const GameSpec&, const PlayerPolicy&, const AdversaryPolicy&,
                    std::uint64_t seed, const ValueOptions& = {});

// Render a history as "f,x;f,x;..." (the strategy-table key format).
std::string history_key(const History&);

}  // namespace olab
