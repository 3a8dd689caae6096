#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/value.hpp"

namespace olab {

struct RadOptions {
  long long budget = 10'000'000;  // leaf paths (exact) / candidate trees (exhaustive search)
  bool collapse = true;
};

// Complete (f,x)-labelled binary tree in heap order: node i branches to 2i+1 on
// sign -1 and 2i+2 on sign +1; nodes.size() == 2^T - 1.
struct LabeledTree {
  int T = 0;
  std::vector<std::pair<int, int>> nodes;
  void validate(const GameSpec&) const;
};

// Interleaved sup/average recursion: each round the pair (f_t, x_t) is chosen
// adaptively, then a uniform sign eps_t is drawn; a leaf scores
// max over transforms of sign * B(eps_1 l_phi(f_1,x_1), ..., eps_T l_phi(f_T,x_T)).
// sign=+1 applies B, sign=-1 applies -B (the pairing for neg-norm aggregators).
double rad_exact(const GameSpec&, int sign, const RadOptions& = {});

// Exact expectation over all 2^T sign paths for one fixed tree.
double rad_on_tree_exact(const GameSpec&, const LabeledTree&, int sign);

struct McEstimate {
  double estimate = 0, se = 0;
};
// Monte Carlo over sign paths on a fixed tree. Sampling is chunked with one
// counter stream per fixed-size chunk, so results do not depend on `threads`.
McEstimate rad_on_tree_mc(const GameSpec&, const LabeledTree&, int sign, long long samples,
                          std::uint64_t seed, int threads = 0);

struct TreeSearchResult {
  LabeledTree tree;
  double value = 0;
  bool exhaustive = false;
};
// exhaustive=true enumerates every labelling (budget-guarded) and equals
// rad_exact; otherwise seeded random restarts with coordinate-ascent sweeps.
TreeSearchResult rad_tree_search(const GameSpec&, int sign, int restarts, std::uint64_t seed,
                                 bool exhaustive, const RadOptions& = {});

struct TriplexReport {
  double val = 0, rad = 0;
  bool holds = false;  // val <= 2 rad + 1e-9
};
// Requires an average aggregator and an all-departure transform set.
TriplexReport triplex_certificate_linear(const GameSpec&, const ValueOptions& = {});

struct TriplexGrid {
  double t1 = 0, t2 = 0, t3 = 0, total = 0, val = 0;
  std::vector<std::string> caveats;
};
// Diagnostic decomposition estimated over product strategies on a simplex grid
// (resolution = common denominator of the grid distributions).
TriplexGrid triplex_grid_estimate(const GameSpec&, int grid_res, const ValueOptions& = {});

}  // namespace olab
