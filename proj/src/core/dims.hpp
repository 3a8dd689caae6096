#pragma once

#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/radcomp.hpp"

namespace olab {

// Result of a capped dimension search: at_cap means shattering succeeded at
// the cap, so the true dimension is >= cap.
struct DimResult {
  int dim = 0;
  bool at_cap = false;
  std::string text() const;  // "3" or ">=4"
};

// Largest d <= cap admitting an (F x X)-valued tree of depth d shattered by
// the base transform class: on every sign path some single transform realises
// every sign (payoffs must all be +-1, transforms time-invariant, k = 1).
DimResult sdim(const GameSpec&, int cap);

// Fat-shattering dimension at width alpha with per-node witnesses drawn from
// `witness_grid`: on every path one transform stays >= s + alpha/2 at +1 nodes
// and <= s - alpha/2 at -1 nodes.
DimResult fat_dim(const GameSpec&, double alpha, const Vec& witness_grid, int cap);

// Midpoints of consecutive distinct scalar payoff values across all
// transforms and (f,x) pairs: the canonical witness grid.
Vec midpoint_witness_grid(const GameSpec&);

enum class CoverP { one, two, inf, zero };

struct CoverResult {
  long long count = 0;
  bool exact = true;
  double greedy_ratio_bound = 1;  // ln-factor bound reported when greedy ran
};

// Minimal number of real-valued trees alpha-covering every (transform, path)
// pair on the given tree. `zero` runs an exact grouping recursion; the lp
// kinds reduce to minimum set cover over candidate trees built from
// achievable node values plus value midpoints, solved exactly up to
// `candidate_budget` candidates and greedily (when allowed) above.
CoverResult cover_number(CoverP, double alpha, const GameSpec&, const LabeledTree&,
                         bool allow_greedy = false, long long candidate_budget = 10000);

// Largest zero-cover over all depth-T trees (the quantity the combinatorial
// cover theorem bounds), by exact recursion over transform subsets.
long long max_zero_cover(const GameSpec&, int T);

struct SauerReport {
  long long zero_cover = 0;
  int d = 0;       // fat dimension at scale 1 (capped at T)
  int k = 0;       // payoff values lie in {0..k}
  std::string bound_text;  // exact decimal of sum_{i<=d} C(T,i) k^i
  double bound_approx = 0;
  bool holds = false;
};

// Asserts max zero-cover at depth T <= the combinatorial sum with d = fat
// dimension at scale 1. Payoffs must be integers in {0..k}.
SauerReport verify_sauer(const GameSpec&, int T);

}  // namespace olab
