#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <utility>
#include <vector>

#include "core/common.hpp"

namespace olab {

// Complete real-valued binary tree in heap order: node i branches to 2i+1 on
// sign -1 and 2i+2 on sign +1; nodes.size() == 2^T - 1.
struct RealTree {
  int T = 0;
  Vec nodes;
  void validate() const;
};

// sqrt(2 log|V| max over trees and paths of sum_t v_t(eps)^2), by exhaustive
// path scan. All trees must share one depth.
double finite_class_bound(const std::vector<RealTree>& V);

// E_eps max over trees of sum_t eps_t v_t(eps): the exact quantity the bound
// above dominates.
double exact_expected_max(const std::vector<RealTree>& V);

// Tabulated beta -> log N_inf(beta) on (0,1], nonincreasing in beta.
struct CoverTable {
  std::vector<std::pair<double, double>> rows;  // (beta, log_cover), beta ascending
  void validate() const;
};

// Two-column CSV "beta,log_cover" (optional header line); rows get sorted.
CoverTable cover_table_from_csv(const std::string& text);

// Evaluate the table at beta by step interpolation from the right (the value
// at the smallest knot >= beta), constant beyond the ends.
double cover_log_at(const CoverTable&, double beta);

// Inputs for the closed-form calculators. NaN marks "not supplied"; each kind
// checks for the fields it reads and rejects missing ones by name.
struct BoundParams {
  double T = nan_marker();
  double card = nan_marker();          // |Phi_T|
  double payoff_bound = nan_marker();  // script-R: bound on payoffs
  double grad_bound = nan_marker();    // R: bound on gradients / steps
  double sigma = nan_marker();
  double p = nan_marker();
  double q = nan_marker();
  double gamma = nan_marker();
  double c_abs = 1.0;  // unnamed absolute constant, default 1
  CoverTable cover;

  static double nan_marker();
};

// kinds: finite_phi, avg_smooth, two_smooth, p_smooth.
double smoothness_bound(const std::string& kind, const BoundParams&);

// kinds: two_smooth_avg, linear_avg. Integral by trapezoid on the cover grid;
// the infimum over alpha scans the grid knots plus 1.0 (an upper bound on the
// true infimum within one grid cell).
double dudley_bound(const std::string& kind, const BoundParams&);

struct CombParams {
  long long T = -1;
  long long d = -1;       // dimension (sauer / zero_cover_sauer)
  long long k = -1;       // value-range size parameter (sauer) or change count (tracking/accum/budget-free)
  long long changes = -1; // number of change points (tracking, accum)
  long long n = -1;       // N (tracking) or N_inf(alpha) (accum, budget)
  double alpha = -1;
  long long fat = -1;     // fat_alpha (fat_cover)
  double L = -1;          // sequence-length constant (budget)
};

struct CombResult {
  bool is_integer = false;
  boost::multiprecision::cpp_int integer;  // set when is_integer
  double approx = 0;                       // always set
  std::string text;                        // exact decimal or fmt12
};

// kinds: sauer, zero_cover_sauer, fat_cover, tracking, accum, budget.
CombResult combinatorial_bound(const std::string& kind, const CombParams&);

}  // namespace olab
