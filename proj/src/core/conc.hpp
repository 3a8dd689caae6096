#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/lower.hpp"
#include "core/norms.hpp"

namespace olab {

// Inputs for concentration_bound. NaN marks "not supplied"; each kind checks
// for the fields it reads and rejects missing ones by name. Smoothness for
// the smooth kinds comes from `norm` when one is supplied (l1/linf carry no
// smoothness pair and are rejected), otherwise from `sigma`/`p` directly.
struct ConcParams {
  double T = nan_marker();
  double theta = nan_marker();    // deviation: azuma, gensmooth
  double c = nan_marker();        // azuma denominator constant
  double lambda = nan_marker();   // mgf scale: pinelis_step, pinelis_mgf
  double B = nan_marker();        // a.s. step-norm bound
  double sigma = nan_marker();    // smoothness constant
  double eps = nan_marker();      // deviation: pinelis_tail
  double n_gamma = nan_marker();  // family size |Gamma|: pinelis_max_exp
  double a = nan_marker();        // prob_to_exp offset
  double b = nan_marker();        // prob_to_exp exponent rate
  double N = nan_marker();        // prob_to_exp union count
  double nu = nan_marker();       // deviation: smooth_tail
  double R = nan_marker();        // tree radius (smooth_tail) / gradient bound (gensmooth)
  double r_payoff = nan_marker();  // script-R step radius: gensmooth
  double p = nan_marker();        // smoothness exponent
  double q = nan_marker();        // power whose smoothness is assumed: gensmooth
  double c_abs = 1.0;             // unnamed absolute constant, default 1
  bool has_norm = false;
  NormSpec norm;

  static double nan_marker();
};

// Closed-form martingale bounds. Kinds:
//   azuma           2 exp(-T theta^2 / (2c))
//   pinelis_step    c = 1 + sigma (e^{lambda B} - 1 - lambda B)
//   pinelis_mgf     2 c^T with c as in pinelis_step
//   pinelis_tail    2 exp(-eps^2 / (4 T sigma B^2)),  valid iff T > eps/(2 sigma B)
//   pinelis_max_exp 2 B sqrt(sigma log(2|Gamma|) T),  valid iff T >= log(2|Gamma|)/sigma
//   prob_to_exp     a + (sqrt(log(2N)) + 1) sqrt(4/b)
//   smooth_tail     2 exp(-nu^2 T^{2-2/p} / (2 sigma^{2/p} log^3 T)),
//                   valid iff nu > c_abs * 8 sigma^{1/p} log^{3/2}(T) / T^{1-1/p};
//                   the bound covers deviations above smooth_tail_threshold()
//   gensmooth       exp(-(theta^q - sigma T r^p / p)^2 / (2 r^2 R^2 T)), r = r_payoff,
//                   valid iff theta^q >= sigma T r^p / p
// Violated validity conditions are errors naming the condition.
double concentration_bound(const std::string& kind, const ConcParams&);

// The deviation level smooth_tail certifies: 128 c_abs (sigma^{1/p} R / T^{1-1/p} + nu R).
double smooth_tail_threshold(const ConcParams&);

// Complete binary tree of k-vectors in heap order: node i branches to 2i+1 on
// sign -1 and 2i+2 on sign +1; nodes.size() == 2^T - 1.
struct VecTree {
  int T = 0;
  int k = 1;
  std::vector<Vec> nodes;
  void validate() const;
};

// A sign-generated martingale difference sequence: increments eps_t * x_t(eps)
// read off a tree of k-vectors. Either a dense tree (palette empty) or, for
// depths where 2^T - 1 nodes are unrepresentable, a procedural tree whose node
// values are seeded counter-hash picks from a finite palette.
struct MdsSpec {
  VecTree tree;              // dense mode when tree.nodes is nonempty
  std::vector<Vec> palette;  // procedural mode otherwise
  std::uint64_t palette_seed = 0;
  int T = 0;  // procedural mode depth (dense mode takes tree.T)
  int k = 1;  // procedural mode dimension (dense mode takes tree.k)
  double B = 1;  // a.s. bound on node norms
  NormSpec norm;
  double sigma = ConcParams::nan_marker();  // optional; must match the norm's table value

  // Norm must carry a (sigma, 2) smoothness pair; every node norm must be <= B.
  void validate() const;
  int depth() const { return tree.nodes.empty() ? T : tree.T; }
  int dim() const { return tree.nodes.empty() ? k : tree.k; }
  double effective_sigma() const;
  // x_t(eps) for t in [0, T): path_bits bit s holds the sign of round s (1 = +1).
  Vec node_at(int t, std::uint64_t path_bits) const;
};

struct TailRow {
  double threshold = 0;
  double empirical = 0;  // fraction of samples with ||sum|| > threshold
  double bound = 0;      // pinelis_tail at this threshold
  double se = 0;         // binomial standard error of `empirical`
  bool valid = false;    // pinelis_tail validity condition holds here
  bool pass = false;     // empirical <= bound + 3 se (asserted only when valid)
};
struct TailReport {
  std::vector<TailRow> rows;
  bool holds = true;  // no valid threshold failed the 3-sigma dominance check
};

// Samples sign paths of the MDS and compares the empirical tail of
// ||sum_t eps_t x_t(eps)|| against pinelis_tail at each threshold. Sampling is
// chunked with one counter stream per fixed-size chunk, so results do not
// depend on `threads`.
TailReport mc_tail_report(const MdsSpec&, const Vec& thresholds, long long samples,
                          std::uint64_t seed, int threads = 0);

// Upper proxy for the sup over martingale-difference distributions: twice the
// sign-tree supremum (general MDS are within a factor of two of Walsh-Paley).
double mds_sup_estimate(const std::vector<Vec>& H, const NormSpec&, int T, WpMode mode);

}  // namespace olab
