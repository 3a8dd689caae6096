#pragma once

#include <vector>

#include "core/model.hpp"
#include "core/norms.hpp"
#include "core/value.hpp"

namespace olab {

// True iff the adversary table makes the expected final regret identical
// (within 1e-9) across all pure player strategies. With the adversary fixed,
// the best and worst pure strategies come from one backward min/max recursion,
// and pure equality extends to mixed strategies because the expectation is
// multilinear in each round's mix.
bool check_equalizer(const GameSpec&, const StrategyTable& adversary);

// Adversary table playing the same mixture p over X at every history.
StrategyTable stationary_adversary(const GameSpec&, const Vec& p);

// sup over choice-valued trees of E_eps max_f (1/T) sum_t eps_t val[f][c_t(eps)]
// by exact recursion on the per-f signed sums.
double rademacher_tree_sup(const std::vector<std::vector<double>>& val, int T,
                           long long budget = 10'000'000);

// val[f][z] in [-1,1]: the sequential Rademacher lower bound for absolute-loss
// prediction with function class F over instance space Z.
double supervised_lower(const std::vector<std::vector<double>>& fvals, int T);

// Companion game: X = Z x {+1,-1}, loss |f(z) - y|, external-regret transforms.
GameSpec make_supervised_game(const std::vector<std::string>& z_labels,
                              const std::vector<std::vector<double>>& fvals, int T);

// Linear-loss analogue over <f, x>.
double linear_lower(const std::vector<Vec>& fs, const std::vector<Vec>& xs, int T);

// Companion linear game; the adversary set is symmetrized to X ∪ -X so the
// sign-tree adversary of the lower bound is actually available in the game.
GameSpec make_linear_game(const std::vector<Vec>& fs, const std::vector<Vec>& xs, int T);

enum class WpMode { exhaustive, greedy };

// sup over H-valued trees of E_eps ||(1/T) sum_t eps_t x_t(eps)||. Exhaustive
// mode is exact (the sup decomposes along the tree, so it never materializes
// the |H|^(2^T-1) trees its budget formula counts); greedy mode improves one
// explicit tree by coordinate ascent and is a lower witness.
double walsh_paley_sup(const std::vector<Vec>& H, const NormSpec&, int T, WpMode,
                       long long budget = 10'000'000);

// Sign game induced by H: F = {-1,+1}, X = H, payoff f*x, scored by distance
// of the average payoff to {0} (the single transform pins the benchmark at 0).
GameSpec make_blackwell_game(const std::vector<Vec>& H, const NormSpec&, int T);

struct BlackwellLowerReport {
  double value = 0;        // exact value of the induced sign game
  double walsh_paley = 0;  // Walsh-Paley estimate (exact or greedy witness)
  WpMode mode_used = WpMode::exhaustive;
  bool holds = false;      // value >= walsh_paley/2 - 1e-9
};
BlackwellLowerReport blackwell_lower_check(const std::vector<Vec>& H, const NormSpec&, int T);

}  // namespace olab
