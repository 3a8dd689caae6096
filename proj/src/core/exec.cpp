#include "core/exec.hpp"

#include <cmath>
#include <map>

#include "core/dims.hpp"
#include "core/fuzz.hpp"
#include "core/lower.hpp"
#include "core/oracle.hpp"

namespace olab {

namespace {

std::string path0(const char* key) { return std::string(".") + key; }

double num_field(const Json& j, const char* key) { return jnum(jget(j, "", key), path0(key)); }

long long int_field(const Json& j, const char* key) {
  return jint(jget(j, "", key), path0(key));
}

std::string str_field(const Json& j, const char* key) {
  return jstr(jget(j, "", key), path0(key));
}

std::uint64_t seed_field(const Json& j) { return ju64(jget(j, "", "seed"), ".seed"); }

double opt_num(const Json& j, const char* key, double dflt) {
  const Json* v = jopt(j, key);
  return v ? jnum(*v, path0(key)) : dflt;
}

long long opt_int(const Json& j, const char* key, long long dflt) {
  const Json* v = jopt(j, key);
  return v ? jint(*v, path0(key)) : dflt;
}

bool opt_bool(const Json& j, const char* key, bool dflt) {
  const Json* v = jopt(j, key);
  return v ? jbool(*v, path0(key)) : dflt;
}

std::string opt_str(const Json& j, const char* key, const std::string& dflt) {
  const Json* v = jopt(j, key);
  return v ? jstr(*v, path0(key)) : dflt;
}

int opt_threads(const Json& j) { return static_cast<int>(opt_int(j, "threads", 0)); }

ValueOptions value_opts(const Json& j) {
  ValueOptions o;
  o.budget = opt_int(j, "budget", o.budget);
  o.collapse = opt_bool(j, "collapse", o.collapse);
  return o;
}

int sign_field(const Json& j) {
  const long long s = opt_int(j, "sign", 1);
  if (s != 1 && s != -1) fail_parse(".sign: expected 1 or -1");
  return static_cast<int>(s);
}

// Allowed top-level members: "schema"/"kind" plus the operation's own fields,
// plus the inline-game fields when the operation takes a game.  The runtime
// tuning fields "seed", "threads", and "budget" are tolerated everywhere so
// callers (the CLI in particular) may inject them unconditionally; operations
// that have no use for them ignore them.
void check_keys(const Json& j, std::initializer_list<const char*> extra, bool with_game = false) {
  std::vector<const char*> allowed{"schema", "kind", "seed", "threads", "budget"};
  if (with_game)
    for (const char* k : game_keys()) allowed.push_back(k);
  for (const char* k : extra) allowed.push_back(k);
  jcheck_keys(j, "", allowed);
}

Json trace_to_json(const std::vector<TraceRow>& trace) {
  Json out = Json::array();
  for (const auto& row : trace) out.push_back(Json{{"t", row.t}, {"value", row.value}});
  return out;
}

Json battery_to_json(const BatteryReport& r) {
  return Json{{"count", r.count},
              {"failures", r.failures},
              {"worst", r.worst},
              {"worst_what", r.worst_what},
              {"holds", r.holds}};
}

WpMode wp_mode_field(const Json& j) {
  const std::string mode = opt_str(j, "mode", "exhaustive");
  if (mode == "exhaustive") return WpMode::exhaustive;
  if (mode == "greedy") return WpMode::greedy;
  fail_parse(".mode: expected exhaustive or greedy");
}

// --- value engine ------------------------------------------------------------

Json op_value(const Json& j) {
  check_keys(j, {"budget", "collapse", "mode"}, true);
  const GameSpec g = game_from_json(j, "");
  const std::string mode = opt_str(j, "mode", "float");
  if (mode == "rational") {
    const Rat r = exact_value_rational(g);
    return Json{{"value", rat_to_double(r)},
                {"rational", r.str()},
                {"mode", "rational"}};
  }
  if (mode != "float") fail_parse(".mode: expected float or rational");
  return Json{{"value", exact_value(g, value_opts(j))}, {"mode", "float"}};
}

Json op_theta_value(const Json& j) {
  check_keys(j, {"theta", "budget", "collapse"}, true);
  const GameSpec g = game_from_json(j, "");
  return Json{{"value", exact_theta_value(g, num_field(j, "theta"), value_opts(j))}};
}

Json op_gamma_value(const Json& j) {
  check_keys(j, {"gamma", "budget", "collapse"}, true);
  const GameSpec g = game_from_json(j, "");
  const GammaSpec gamma = gamma_from_json(jget(j, "", "gamma"), ".gamma");
  return Json{{"value", exact_gamma_value(g, gamma, value_opts(j))}};
}

// --- sequential complexity -----------------------------------------------------

Json op_rad_exact(const Json& j) {
  check_keys(j, {"sign", "budget", "collapse"}, true);
  const GameSpec g = game_from_json(j, "");
  RadOptions o;
  o.budget = opt_int(j, "budget", o.budget);
  o.collapse = opt_bool(j, "collapse", o.collapse);
  return Json{{"rad", rad_exact(g, sign_field(j), o)}};
}

LabeledTree tree_field(const Json& j, const GameSpec& g) {
  LabeledTree t = labeled_tree_from_json(jget(j, "", "tree"), ".tree");
  try {
    t.validate(g);
  } catch (const Error& e) {
    throw Error(e.code, ".tree: " + std::string(e.what()));
  }
  return t;
}

Json op_rad_tree(const Json& j) {
  check_keys(j, {"tree", "sign"}, true);
  const GameSpec g = game_from_json(j, "");
  return Json{{"rad", rad_on_tree_exact(g, tree_field(j, g), sign_field(j))}};
}

Json op_rad_mc(const Json& j) {
  check_keys(j, {"tree", "sign", "samples", "seed", "threads"}, true);
  const GameSpec g = game_from_json(j, "");
  const McEstimate e =
      rad_on_tree_mc(g, tree_field(j, g), sign_field(j),
                     static_cast<int>(opt_int(j, "samples", 10000)), seed_field(j),
                     opt_threads(j));
  return Json{{"estimate", e.estimate}, {"se", e.se}};
}

Json op_rad_search(const Json& j) {
  check_keys(j, {"sign", "restarts", "seed", "exhaustive", "budget", "collapse"}, true);
  const GameSpec g = game_from_json(j, "");
  RadOptions o;
  o.budget = opt_int(j, "budget", o.budget);
  o.collapse = opt_bool(j, "collapse", o.collapse);
  const TreeSearchResult r =
      rad_tree_search(g, sign_field(j), static_cast<int>(opt_int(j, "restarts", 32)),
                      seed_field(j), opt_bool(j, "exhaustive", false), o);
  return Json{{"value", r.value},
              {"exhaustive", r.exhaustive},
              {"tree", labeled_tree_to_json(r.tree)}};
}

Json op_certificate(const Json& j) {
  check_keys(j, {"budget", "collapse"}, true);
  const GameSpec g = game_from_json(j, "");
  const TriplexReport r = triplex_certificate_linear(g, value_opts(j));
  return Json{{"value", r.val}, {"rad", r.rad}, {"holds", r.holds}};
}

Json op_certificate_grid(const Json& j) {
  check_keys(j, {"grid_res", "budget", "collapse"}, true);
  const GameSpec g = game_from_json(j, "");
  const TriplexGrid r =
      triplex_grid_estimate(g, static_cast<int>(int_field(j, "grid_res")), value_opts(j));
  return Json{{"t1", r.t1},     {"t2", r.t2},       {"t3", r.t3},
              {"total", r.total}, {"value", r.val}, {"caveats", r.caveats}};
}

// --- closed-form bounds ----------------------------------------------------------

Json op_bounds_finite_class(const Json& j) {
  check_keys(j, {"trees"});
  const std::vector<RealTree> trees = real_trees_from_json(jget(j, "", "trees"), ".trees");
  const double bound = finite_class_bound(trees);
  const double emax = exact_expected_max(trees);
  return Json{{"bound", bound}, {"exact_max", emax}, {"holds", emax <= bound + 1e-9}};
}

Json op_bounds_smoothness(const Json& j) {
  check_keys(j, {"calculator", "params"});
  const BoundParams p = bound_params_from_json(jget(j, "", "params"), ".params");
  return Json{{"value", smoothness_bound(str_field(j, "calculator"), p)}};
}

Json op_bounds_dudley(const Json& j) {
  check_keys(j, {"calculator", "params"});
  const BoundParams p = bound_params_from_json(jget(j, "", "params"), ".params");
  return Json{{"value", dudley_bound(str_field(j, "calculator"), p)}};
}

Json op_bounds_combinatorial(const Json& j) {
  check_keys(j, {"calculator", "params"});
  const CombParams p = comb_params_from_json(jget(j, "", "params"), ".params");
  const CombResult r = combinatorial_bound(str_field(j, "calculator"), p);
  return Json{{"text", r.text}, {"approx", r.approx}, {"is_integer", r.is_integer}};
}

// --- dimensions and covers ---------------------------------------------------------

Json dim_to_json(const DimResult& d) {
  return Json{{"dim", d.dim}, {"at_cap", d.at_cap}, {"text", d.text()}};
}

Json op_dims_sdim(const Json& j) {
  check_keys(j, {"cap"}, true);
  const GameSpec g = game_from_json(j, "");
  return dim_to_json(sdim(g, static_cast<int>(opt_int(j, "cap", g.T))));
}

Json op_dims_fat(const Json& j) {
  check_keys(j, {"alpha", "cap", "witness_grid"}, true);
  const GameSpec g = game_from_json(j, "");
  Vec grid;
  if (const Json* w = jopt(j, "witness_grid"))
    grid = jvec(*w, ".witness_grid");
  else
    grid = midpoint_witness_grid(g);
  return dim_to_json(
      fat_dim(g, num_field(j, "alpha"), grid, static_cast<int>(opt_int(j, "cap", g.T))));
}

Json op_cover_number(const Json& j) {
  check_keys(j, {"tree", "p", "alpha", "allow_greedy", "candidate_budget"}, true);
  const GameSpec g = game_from_json(j, "");
  const std::string p = str_field(j, "p");
  CoverP cp;
  if (p == "zero")
    cp = CoverP::zero;
  else if (p == "one")
    cp = CoverP::one;
  else if (p == "two")
    cp = CoverP::two;
  else if (p == "inf")
    cp = CoverP::inf;
  else
    fail_parse(".p: expected zero, one, two, or inf");
  const double alpha =
      cp == CoverP::zero ? opt_num(j, "alpha", 0.0) : num_field(j, "alpha");
  const CoverResult r = cover_number(cp, alpha, g, tree_field(j, g),
                                     opt_bool(j, "allow_greedy", false),
                                     opt_int(j, "candidate_budget", 10000));
  return Json{{"count", r.count},
              {"exact", r.exact},
              {"greedy_ratio_bound", r.greedy_ratio_bound}};
}

Json op_cover_max_zero(const Json& j) {
  check_keys(j, {"depth"}, true);
  const GameSpec g = game_from_json(j, "");
  return Json{{"count", max_zero_cover(g, static_cast<int>(opt_int(j, "depth", g.T)))}};
}

Json op_cover_sauer(const Json& j) {
  check_keys(j, {"depth"}, true);
  const GameSpec g = game_from_json(j, "");
  const SauerReport r = verify_sauer(g, static_cast<int>(opt_int(j, "depth", g.T)));
  return Json{{"zero_cover", r.zero_cover}, {"d", r.d},
              {"k", r.k},                   {"bound", r.bound_text},
              {"bound_approx", r.bound_approx}, {"holds", r.holds}};
}

// --- game play -------------------------------------------------------------------

Json op_game_run(const Json& j) {
  check_keys(j, {"player", "adversary", "seed", "budget", "collapse"}, true);
  const GameSpec g = game_from_json(j, "");
  const PlayerPolicy pl = player_policy_from_json(jget(j, "", "player"), ".player", g);
  const AdversaryPolicy ad =
      adversary_policy_from_json(jget(j, "", "adversary"), ".adversary", g);
  const History h = run_episode(g, pl, ad, seed_field(j), value_opts(j));
  return Json{{"history", history_key(h)}, {"regret", regret_of_history(g, h)}};
}

Json op_game_simulate(const Json& j) {
  check_keys(j, {"player", "adversary", "reps", "seed", "budget", "collapse", "with_regrets"},
             true);
  const GameSpec g = game_from_json(j, "");
  const PlayerPolicy pl = player_policy_from_json(jget(j, "", "player"), ".player", g);
  const AdversaryPolicy ad =
      adversary_policy_from_json(jget(j, "", "adversary"), ".adversary", g);
  const SimResult r = simulate(g, pl, ad, static_cast<int>(int_field(j, "reps")), seed_field(j),
                               value_opts(j));
  Json out{{"mean", r.mean}, {"se", r.se}};
  if (opt_bool(j, "with_regrets", false)) out["regrets"] = r.regrets;
  return out;
}

Json op_report(const Json& j) {
  check_keys(j, {}, true);
  const GameSpec g = game_from_json(j, "");
  return Json{{"nf", g.nf()},
              {"nx", g.nx()},
              {"T", g.T},
              {"k", g.payoff.k},
              {"aggregator", g.agg.kind_name()},
              {"transforms", g.phi.seqs.size()},
              {"time_invariant", g.phi.time_invariant},
              {"all_departure", g.phi.all_departure},
              {"radius", g.radius},
              {"work_norm", g.work_norm().name()},
              {"game", game_to_json(g)}};
}

// --- approachability and calibration ---------------------------------------------

PayoffTable payoff_field(const Json& j) {
  return payoff_from_json(jget(j, "", "payoff"), ".payoff");
}

Json op_blackwell_one_shot(const Json& j) {
  check_keys(j, {"payoff", "target", "norm", "grid_res"});
  const OneShotReport r = one_shot_check(
      payoff_field(j), target_from_json(jget(j, "", "target"), ".target"),
      norm_from_json(jget(j, "", "norm"), ".norm"),
      static_cast<int>(opt_int(j, "grid_res", 64)));
  return Json{{"margin", r.margin},
              {"worst_p", r.worst_p},
              {"holds", r.certified_on_grid},
              {"caveat", r.caveat}};
}

BwOpponent bw_opponent_field(const Json& j) {
  const std::string o = str_field(j, "opponent");
  if (o == "best_response") return BwOpponent::best_response;
  if (o == "constant") return BwOpponent::constant;
  if (o == "uniform") return BwOpponent::uniform;
  fail_parse(".opponent: expected best_response, constant, or uniform");
}

Json op_blackwell_run(const Json& j) {
  check_keys(j, {"payoff", "target", "norm", "T", "opponent", "constant_x", "seed",
                 "trace_points"});
  const BlackwellRun r = run_blackwell(
      payoff_field(j), target_from_json(jget(j, "", "target"), ".target"),
      norm_from_json(jget(j, "", "norm"), ".norm"), int_field(j, "T"), bw_opponent_field(j),
      static_cast<int>(opt_int(j, "constant_x", 0)), seed_field(j),
      static_cast<int>(opt_int(j, "trace_points", 64)));
  return Json{{"final_distance", r.final_distance},
              {"first_correction", r.first_correction},
              {"trace", trace_to_json(r.trace)}};
}

CalibOpponent calib_opponent_field(const Json& j) {
  const std::string o = str_field(j, "opponent");
  if (o == "constant") return CalibOpponent::constant;
  if (o == "random_bits") return CalibOpponent::random_bits;
  if (o == "adaptive") return CalibOpponent::adaptive;
  fail_parse(".opponent: expected constant, random_bits, or adaptive");
}

Json op_calibrate_run(const Json& j) {
  check_keys(j, {"k", "delta", "T", "opponent", "constant_outcome", "seed", "trace_points",
                 "budget", "with_transcript"});
  const long long T = int_field(j, "T");
  if (T < 1) fail_parse(".T: expected T >= 1");
  const double delta = opt_num(j, "delta", 1.0 / std::sqrt(static_cast<double>(T)));
  const CalibRun r = run_calibrated(
      static_cast<int>(int_field(j, "k")), delta, T, calib_opponent_field(j),
      static_cast<int>(opt_int(j, "constant_outcome", 0)), seed_field(j),
      static_cast<int>(opt_int(j, "trace_points", 0)), opt_int(j, "budget", 200'000));
  Json out{{"regret", r.regret}, {"delta", delta}, {"trace", trace_to_json(r.trace)}};
  if (opt_bool(j, "with_transcript", false)) out["transcript"] = transcript_to_json(r.transcript);
  return out;
}

Json op_calibrate_doubling(const Json& j) {
  check_keys(j, {"k", "T", "opponent", "constant_outcome", "seed", "trace_points",
                 "with_transcript"});
  const DoublingRun r = run_doubling(
      static_cast<int>(int_field(j, "k")), int_field(j, "T"), calib_opponent_field(j),
      static_cast<int>(opt_int(j, "constant_outcome", 0)), seed_field(j),
      static_cast<int>(opt_int(j, "trace_points", 32)));
  Json out{{"regret", r.regret},
           {"boundaries", r.boundaries},
           {"trace", trace_to_json(r.trace)}};
  if (opt_bool(j, "with_transcript", false)) out["transcript"] = transcript_to_json(r.transcript);
  return out;
}

Json op_calibrate_regret(const Json& j) {
  check_keys(j, {"transcript", "norm"});
  const CalibrationTranscript tr =
      transcript_from_json(jget(j, "", "transcript"), ".transcript");
  NormSpec norm;
  norm.kind = NormSpec::Kind::l1;
  if (const Json* n = jopt(j, "norm")) norm = norm_from_json(*n, ".norm");
  return Json{{"regret", calibration_regret(tr, norm)}};
}

// --- lower bounds -----------------------------------------------------------------

Json op_lower_equalizer(const Json& j) {
  check_keys(j, {"adversary_table", "stationary"}, true);
  const GameSpec g = game_from_json(j, "");
  StrategyTable table;
  const Json* tj = jopt(j, "adversary_table");
  const Json* sj = jopt(j, "stationary");
  if ((tj != nullptr) == (sj != nullptr))
    fail_parse(".adversary_table: expected exactly one of \"adversary_table\" or \"stationary\"");
  if (tj)
    table = strategy_from_json(*tj, ".adversary_table", g, true);
  else
    table = stationary_adversary(g, jvec(*sj, ".stationary"));
  return Json{{"holds", check_equalizer(g, table)}};
}

Json op_lower_tree_sup(const Json& j) {
  check_keys(j, {"values", "T", "budget"});
  std::vector<std::vector<double>> vals;
  const Json& rows = jget(j, "", "values");
  if (!rows.is_array()) fail_parse(".values: expected an array");
  for (std::size_t f = 0; f < rows.size(); ++f)
    vals.push_back(jvec(rows[f], ".values[" + std::to_string(f) + "]"));
  return Json{{"value", rademacher_tree_sup(vals, static_cast<int>(int_field(j, "T")),
                                            opt_int(j, "budget", 10'000'000))}};
}

Json op_lower_supervised(const Json& j) {
  check_keys(j, {"fvals", "T"});
  std::vector<std::vector<double>> vals;
  const Json& rows = jget(j, "", "fvals");
  if (!rows.is_array()) fail_parse(".fvals: expected an array");
  for (std::size_t f = 0; f < rows.size(); ++f)
    vals.push_back(jvec(rows[f], ".fvals[" + std::to_string(f) + "]"));
  return Json{{"value", supervised_lower(vals, static_cast<int>(int_field(j, "T")))}};
}

Json op_lower_linear(const Json& j) {
  check_keys(j, {"fs", "xs", "T"});
  return Json{{"value", linear_lower(jkvecs(jget(j, "", "fs"), ".fs"),
                                     jkvecs(jget(j, "", "xs"), ".xs"),
                                     static_cast<int>(int_field(j, "T")))}};
}

Json op_lower_walsh_paley(const Json& j) {
  check_keys(j, {"H", "norm", "T", "mode", "budget"});
  const WpMode mode = wp_mode_field(j);
  const double v = walsh_paley_sup(jkvecs(jget(j, "", "H"), ".H"),
                                   norm_from_json(jget(j, "", "norm"), ".norm"),
                                   static_cast<int>(int_field(j, "T")), mode,
                                   opt_int(j, "budget", 10'000'000));
  return Json{{"value", v}, {"mode", mode == WpMode::exhaustive ? "exhaustive" : "greedy"}};
}

Json op_lower_blackwell(const Json& j) {
  check_keys(j, {"H", "norm", "T"});
  const BlackwellLowerReport r = blackwell_lower_check(
      jkvecs(jget(j, "", "H"), ".H"), norm_from_json(jget(j, "", "norm"), ".norm"),
      static_cast<int>(int_field(j, "T")));
  return Json{{"value", r.value},
              {"walsh_paley", r.walsh_paley},
              {"mode", r.mode_used == WpMode::exhaustive ? "exhaustive" : "greedy"},
              {"holds", r.holds}};
}

// --- concentration ----------------------------------------------------------------

Json op_conc_bound(const Json& j) {
  check_keys(j, {"bound", "params"});
  const ConcParams p = conc_params_from_json(jget(j, "", "params"), ".params");
  return Json{{"value", concentration_bound(str_field(j, "bound"), p)}};
}

Json op_conc_threshold(const Json& j) {
  check_keys(j, {"params"});
  const ConcParams p = conc_params_from_json(jget(j, "", "params"), ".params");
  return Json{{"value", smooth_tail_threshold(p)}};
}

Json op_conc_mc_tail(const Json& j) {
  check_keys(j, {"mds", "thresholds", "samples", "seed", "threads"});
  const MdsSpec m = mds_from_json(jget(j, "", "mds"), ".mds");
  const TailReport r = mc_tail_report(m, jvec(jget(j, "", "thresholds"), ".thresholds"),
                                      int_field(j, "samples"), seed_field(j), opt_threads(j));
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"threshold", row.threshold},
                        {"empirical", row.empirical},
                        {"bound", row.bound},
                        {"se", row.se},
                        {"valid", row.valid},
                        {"pass", row.pass}});
  return Json{{"rows", std::move(rows)}, {"holds", r.holds}};
}

Json op_conc_mds_sup(const Json& j) {
  check_keys(j, {"H", "norm", "T", "mode"});
  return Json{{"value", mds_sup_estimate(jkvecs(jget(j, "", "H"), ".H"),
                                         norm_from_json(jget(j, "", "norm"), ".norm"),
                                         static_cast<int>(int_field(j, "T")),
                                         wp_mode_field(j))}};
}

// --- property batteries --------------------------------------------------------------

Json op_fuzz_triplex(const Json& j) {
  check_keys(j, {"count", "seed"});
  return battery_to_json(battery_triplex(opt_int(j, "count", 200), seed_field(j)));
}

Json op_fuzz_finite_class(const Json& j) {
  check_keys(j, {"count", "seed"});
  return battery_to_json(battery_finite_class(opt_int(j, "count", 200), seed_field(j)));
}

Json op_fuzz_rational(const Json& j) {
  check_keys(j, {});
  return battery_to_json(battery_rational());
}

Json op_fuzz_markov(const Json& j) {
  check_keys(j, {});
  return battery_to_json(battery_markov());
}

Json op_fuzz_sauer(const Json& j) {
  check_keys(j, {"threads"});
  return battery_to_json(battery_sauer(opt_threads(j)));
}

Json op_fuzz_tail(const Json& j) {
  check_keys(j, {"specs", "samples", "seed", "threads"});
  return battery_to_json(battery_tail(opt_int(j, "specs", 20), opt_int(j, "samples", 100'000),
                                      seed_field(j), opt_threads(j)));
}

Json op_fuzz_concavity(const Json& j) {
  check_keys(j, {"trials", "seed"});
  return battery_to_json(battery_concavity(opt_int(j, "trials", 10'000), seed_field(j)));
}

Json op_fuzz_adaptive(const Json& j) {
  check_keys(j, {});
  return battery_to_json(battery_adaptive_encoding());
}

// --- registry -------------------------------------------------------------------------

struct OpInfo {
  Json (*handler)(const Json&);
  bool randomized;
};

const std::map<std::string, OpInfo>& registry() {
  static const std::map<std::string, OpInfo> reg = {
      {"value", {op_value, false}},
      {"theta-value", {op_theta_value, false}},
      {"gamma-value", {op_gamma_value, false}},
      {"rad.exact", {op_rad_exact, false}},
      {"rad.tree", {op_rad_tree, false}},
      {"rad.mc", {op_rad_mc, true}},
      {"rad.search", {op_rad_search, true}},
      {"certificate", {op_certificate, false}},
      {"certificate.grid", {op_certificate_grid, false}},
      {"bounds.finite-class", {op_bounds_finite_class, false}},
      {"bounds.smoothness", {op_bounds_smoothness, false}},
      {"bounds.dudley", {op_bounds_dudley, false}},
      {"bounds.combinatorial", {op_bounds_combinatorial, false}},
      {"dims.sdim", {op_dims_sdim, false}},
      {"dims.fat", {op_dims_fat, false}},
      {"cover.number", {op_cover_number, false}},
      {"cover.max-zero", {op_cover_max_zero, false}},
      {"cover.sauer", {op_cover_sauer, false}},
      {"game.run", {op_game_run, true}},
      {"game.simulate", {op_game_simulate, true}},
      {"report", {op_report, false}},
      {"blackwell.one-shot", {op_blackwell_one_shot, false}},
      {"blackwell.run", {op_blackwell_run, true}},
      {"calibrate.run", {op_calibrate_run, true}},
      {"calibrate.doubling", {op_calibrate_doubling, true}},
      {"calibrate.regret", {op_calibrate_regret, false}},
      {"lower.equalizer", {op_lower_equalizer, false}},
      {"lower.tree-sup", {op_lower_tree_sup, false}},
      {"lower.supervised", {op_lower_supervised, false}},
      {"lower.linear", {op_lower_linear, false}},
      {"lower.walsh-paley", {op_lower_walsh_paley, false}},
      {"lower.blackwell", {op_lower_blackwell, false}},
      {"concentration.bound", {op_conc_bound, false}},
      {"concentration.threshold", {op_conc_threshold, false}},
      {"concentration.mc-tail", {op_conc_mc_tail, true}},
      {"concentration.mds-sup", {op_conc_mds_sup, false}},
      {"fuzz.triplex", {op_fuzz_triplex, true}},
      {"fuzz.finite-class", {op_fuzz_finite_class, true}},
      {"fuzz.rational", {op_fuzz_rational, false}},
      {"fuzz.markov", {op_fuzz_markov, false}},
      {"fuzz.sauer", {op_fuzz_sauer, false}},
      {"fuzz.tail", {op_fuzz_tail, true}},
      {"fuzz.concavity", {op_fuzz_concavity, true}},
      {"fuzz.adaptive", {op_fuzz_adaptive, false}},
  };
  return reg;
}

}  // namespace

Json exec_json(const Json& config) {
  const long long schema = jint(jget(config, "", "schema"), ".schema");
  if (schema != 1)
    fail_parse(".schema: unsupported schema version " + std::to_string(schema) +
               " (this build understands 1)");
  const std::string kind = jstr(jget(config, "", "kind"), ".kind");
  const auto it = registry().find(kind);
  if (it == registry().end()) fail_parse(".kind: unknown kind \"" + kind + "\"");
  if (it->second.randomized && !jopt(config, "seed"))
    fail_parse(".seed: missing required field (\"" + kind + "\" is randomized)");
  Json result = it->second.handler(config);
  result["schema"] = 1;
  result["kind"] = kind;
  return result;
}

std::string exec_text(const std::string& config_text) {
  const Json config = parse_json_text(config_text, "config");
  return exec_json(config).dump(2) + "\n";
}

std::vector<std::string> exec_kinds() {
  std::vector<std::string> out;
  for (const auto& [kind, info] : registry()) out.push_back(kind);
  return out;
}

bool exec_kind_randomized(const std::string& kind) {
  const auto it = registry().find(kind);
  return it != registry().end() && it->second.randomized;
}

}  // namespace olab
