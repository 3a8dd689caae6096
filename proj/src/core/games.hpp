#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/norms.hpp"

namespace olab {

// One round per row: a simplex forecast and the realised outcome vertex.
struct CalibrationTranscript {
  int k = 0;
  std::vector<Vec> forecasts;
  std::vector<int> outcomes;
  void validate() const;
  std::string to_csv() const;  // forecast coordinates then outcome index
  static CalibrationTranscript from_csv(const std::string& text);
};

// Maximal 2*delta-packing of the probability simplex in L1, built greedily
// over a lattice of resolution `lattice_res` (0 selects a default fine grid).
// Pairwise L1 distances exceed 2*delta and every lattice point sits within
// 2*delta of some member.
struct GridSimplex {
  int k = 0;
  double delta = 0;
  std::vector<Vec> points;
};
GridSimplex make_grid_simplex(int k, double delta, int lattice_res = 0);

// Average-aggregator game whose transforms are the constant departure maps,
// one per player action: plain external regret.
GameSpec make_external(const std::vector<std::string>& F, const std::vector<std::string>& X,
                       const std::vector<std::vector<double>>& loss, int T);

enum class PhiFamily { explicit_list, internal, swap_all };

// internal: the N(N-1) single-action redirects plus identity; swap_all: all
// N^N self-maps (budget-guarded); explicit_list: caller-supplied maps.
GameSpec make_phi_regret(const std::vector<std::string>& F, const std::vector<std::string>& X,
                         const std::vector<std::vector<double>>& loss, PhiFamily family,
                         const std::vector<std::vector<int>>& explicit_maps, int T,
                         long long budget = 1'000'000);

struct OneShotReport {
  double margin = 0;       // max over grid p of min over q of dist(E loss, S)
  Vec worst_p;             // the attaining adversary mixture
  bool certified_on_grid = false;  // margin <= 1e-9
  std::string caveat;      // off-grid mixtures are unchecked
};
OneShotReport one_shot_check(const PayoffTable&, const TargetSet&, const NormSpec&,
                             int p_grid_res);

// Projection-based approachability player: inside S it plays a fixed uniform
// default; outside it plays the matrix-game minimiser of
// <avg - proj, loss(q,x) - proj> and the harness samples from that mix.
class BlackwellPlayer {
 public:
  BlackwellPlayer(PayoffTable table, TargetSet S, NormSpec norm);
  Vec next_mix();
  void observe(int f, int x);  // realised pure pair
  double distance() const;     // distance of the running average to S
  Vec average() const;
  long long rounds() const { return t_; }
  const PayoffTable& table() const { return tab_; }

 private:
  PayoffTable tab_;
  TargetSet S_;
  NormSpec norm_;
  Vec sum_;
  long long t_ = 0;
};

enum class BwOpponent { best_response, constant, uniform };

struct TraceRow {
  long long t = 0;
  double value = 0;  // distance for approachability runs, regret for calibration
};

struct BlackwellRun {
  double final_distance = 0;
  long long first_correction = 0;  // first round whose average left S (0 = never)
  std::vector<TraceRow> trace;
};
BlackwellRun run_blackwell(const PayoffTable&, const TargetSet&, const NormSpec&, long long T,
                           BwOpponent, int constant_x, std::uint64_t seed, int trace_points = 64);

// Exact: rounds sharing a forecast co-move inside every L1 ball, so patterns
// are enumerated over distinct forecasts with candidate centers at forecast
// points and their pairwise midpoints, thresholds at the realised distances.
double calibration_regret(const CalibrationTranscript&, const NormSpec&);

enum class CalibOpponent { constant, random_bits, adaptive };

struct CalibRun {
  CalibrationTranscript transcript;
  double regret = 0;
  std::vector<TraceRow> trace;
};
// Approachability over the per-grid-cell error vectors (cell c contributes
// 1{f_t = c} (f_t - x_t)), target {0}, forecasts mixed over the grid simplex.
CalibRun run_calibrated(int k, double delta, long long T, CalibOpponent, int constant_outcome,
                        std::uint64_t seed, int trace_points = 0, long long budget = 200'000);

struct DoublingRun {
  CalibrationTranscript transcript;
  double regret = 0;
  std::vector<TraceRow> trace;
  std::vector<long long> boundaries;  // rounds that start a fresh episode
};
// Restarts the fixed-horizon forecaster on episodes of length 2^r with
// delta_r = 2^{-r/2}; episode r begins at round 2^r - 1.
DoublingRun run_doubling(int k, long long T, CalibOpponent, int constant_outcome,
                         std::uint64_t seed, int trace_points = 32);

// Coordinate-product game on supplied grids: payoff f (*) x, norm-of-average
// aggregator, constant departures.
GameSpec make_global_cost(int k, const NormSpec&, int T, const std::vector<Vec>& f_grid,
                          const std::vector<Vec>& x_grid);

// g(x) = inf over simplex f of ||f (*) x||. L1: min_i x_i; Linf: harmonic
// form; Lq: closed form from the stationarity condition.
double simplex_weighted_norm_inf(const Vec& x, const NormSpec&);

struct ConcavityReport {
  long long trials = 0;
  double min_slack = 0;
  bool holds = false;
};
// Midpoint-concavity probe of simplex_weighted_norm_inf on random pairs in
// the positive orthant; holds when min slack >= -1e-7.
ConcavityReport concavity_check(const NormSpec&, int k, long long trials, std::uint64_t seed);

// Exact max over intervals [r,s] of (1/T)(played loss - best single departure
// applied on the interval), by per-map prefix sums.
double adaptive_regret(const std::vector<std::vector<double>>& loss, const History&,
                       const std::vector<std::vector<int>>& psi);

// Interval-indexed override encoding of the adaptive-regret benchmark:
// regret_of_history on the result equals adaptive_regret exactly.
GameSpec make_adaptive_game(const std::vector<std::string>& F, const std::vector<std::string>& X,
                            const std::vector<std::vector<double>>& loss,
                            const std::vector<std::vector<int>>& psi, int T,
                            long long budget = 100'000);

}  // namespace olab
