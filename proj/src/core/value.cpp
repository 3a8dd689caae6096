#include "core/value.hpp"

#include <cmath>
#include <functional>
#include <unordered_map>

#include "core/lp.hpp"
#include "core/rng.hpp"

namespace olab {

std::string history_key(const History& h) {
  std::string out;
  for (std::size_t t = 0; t < h.size(); ++t) {
    if (t) out += ';';
    out += std::to_string(h[t].first);
    out += ',';
    out += std::to_string(h[t].second);
  }
  return out;
}

namespace {

void check_recursion_budget(const GameSpec& g, long long budget) {
  std::string count;
  if (pow_budget_exceeded(static_cast<long long>(g.nf()) * g.nx(), g.T, budget, count))
    fail_budget("exact recursion needs (|F|*|X|)^T = " + count +
                " leaf histories; budget is " + std::to_string(budget) +
                " (raise it explicitly to proceed)");
}

struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.size();
    for (int x : v) h = mix64(h ^ (static_cast<std::uint64_t>(x) + 0x100000001b3ull));
    return static_cast<std::size_t>(h);
  }
};

// Backward induction with running payoff sums. When every transform repeats a
// single step, the leaf is a function of the (f,x) pair counts alone, so states
// that differ only by round order share one memo entry.
class Backward {
 public:
  Backward(const GameSpec& g, std::function<double(double)> leaf, const ValueOptions& opt)
      : g_(g),
        leaf_(std::move(leaf)),
        k_(static_cast<std::size_t>(g.payoff.k)),
        collapse_(opt.collapse && g.phi.time_invariant),
        realised_(k_, 0.0),
        comp_(g.phi.seqs.size(), Vec(k_, 0.0)),
        counts_(static_cast<std::size_t>(g.nf()) * g.nx(), 0) {
    check_recursion_budget(g, opt.budget);
  }

  double run() { return node(0); }

 private:
  double leaf_value() const {
    Vec avg(k_);
    for (std::size_t j = 0; j < k_; ++j) avg[j] = realised_[j] / g_.T;
    const double b_real = aggregate_avg(g_.agg, avg);
    double best = 0;
    bool first = true;
    for (std::size_t s = 0; s < comp_.size(); ++s) {
      for (std::size_t j = 0; j < k_; ++j) avg[j] = comp_[s][j] / g_.T;
      const double b = aggregate_avg(g_.agg, avg);
      if (first || b < best) { best = b; first = false; }
    }
    return leaf_(b_real - best);
  }

  double node(int t) {
    if (t == g_.T) return leaf_value();
    if (collapse_) {
      auto it = memo_.find(counts_);
      if (it != memo_.end()) return it->second;
    }
    const int nf = g_.nf(), nx = g_.nx();
    std::vector<std::vector<double>> M(nf, std::vector<double>(nx));
    for (int f = 0; f < nf; ++f) {
      for (int x = 0; x < nx; ++x) {
        push(t, f, x);
        M[f][x] = node(t + 1);
        pop(t, f, x);
      }
    }
    const double v = solve_matrix_game_t<double>(M, 1e-11, 1e-9).value;
    if (collapse_) memo_.emplace(counts_, v);
    return v;
  }

  void push(int t, int f, int x) {
    const Vec& z = g_.loss(f, x);
    for (std::size_t j = 0; j < k_; ++j) realised_[j] += z[j];
    for (std::size_t s = 0; s < comp_.size(); ++s) {
      const Vec& w = g_.phi_loss(g_.phi.seqs[s], t, f, x);
      for (std::size_t j = 0; j < k_; ++j) comp_[s][j] += w[j];
    }
    ++counts_[static_cast<std::size_t>(f) * g_.nx() + x];
  }

  void pop(int t, int f, int x) {
    const Vec& z = g_.loss(f, x);
    for (std::size_t j = 0; j < k_; ++j) realised_[j] -= z[j];
    for (std::size_t s = 0; s < comp_.size(); ++s) {
      const Vec& w = g_.phi_loss(g_.phi.seqs[s], t, f, x);
      for (std::size_t j = 0; j < k_; ++j) comp_[s][j] -= w[j];
    }
    --counts_[static_cast<std::size_t>(f) * g_.nx() + x];
  }

  const GameSpec& g_;
  std::function<double(double)> leaf_;
  std::size_t k_;
  bool collapse_;
  Vec realised_;
  std::vector<Vec> comp_;
  std::vector<int> counts_;
  std::unordered_map<std::vector<int>, double, IntVecHash> memo_;
};

}  // namespace

double exact_value(const GameSpec& g, const ValueOptions& opt) {
  return Backward(g, [](double r) { return r; }, opt).run();
}

double exact_theta_value(const GameSpec& g, double theta, const ValueOptions& opt) {
  if (!std::isfinite(theta)) fail_invalid("theta must be finite");
  return Backward(g, [theta](double r) { return r > theta ? 1.0 : 0.0; }, opt).run();
}

double exact_gamma_value(const GameSpec& g, const GammaSpec& gs, const ValueOptions& opt) {
  std::function<double(double)> leaf;
  switch (gs.name) {
    case GammaSpec::Name::identity:
      leaf = [](double r) { return r; };
      break;
    case GammaSpec::Name::indicator: {
      if (!std::isfinite(gs.theta)) fail_invalid("indicator leaf needs a finite theta");
      const double th = gs.theta;
      leaf = [th](double r) { return r > th ? 1.0 : 0.0; };
      break;
    }
    case GammaSpec::Name::exp_quadratic: {
      if (!(gs.scale > 0)) fail_invalid("exp_quadratic leaf needs scale > 0");
      if (!std::isfinite(gs.alpha)) fail_invalid("exp_quadratic leaf needs a finite alpha");
      const double a = gs.alpha, sc = gs.scale, T = g.T;
      leaf = [a, sc, T](double r) { return std::exp(a * T * r * r / sc); };
      break;
    }
  }
  return Backward(g, std::move(leaf), opt).run();
}

StrategyTable extract_minimax_strategy(const GameSpec& g, const ValueOptions& opt) {
  check_recursion_budget(g, opt.budget);
  StrategyTable table;
  History h;
  const std::function<double()> rec = [&]() -> double {
    const int t = static_cast<int>(h.size());
    if (t == g.T) return regret_of_history(g, h);
    const int nf = g.nf(), nx = g.nx();
    std::vector<std::vector<double>> M(nf, std::vector<double>(nx));
    for (int f = 0; f < nf; ++f)
      for (int x = 0; x < nx; ++x) {
        h.emplace_back(f, x);
        M[f][x] = rec();
        h.pop_back();
      }
    auto sol = solve_matrix_game_t<double>(M, 1e-11, 1e-9);
    table[h] = std::move(sol.row_mix);
    return sol.value;
  };
  rec();
  return table;
}

double best_response_value(const GameSpec& g, const StrategyTable& table,
                           const ValueOptions& opt) {
  check_recursion_budget(g, opt.budget);
  History h;
  const std::function<double()> rec = [&]() -> double {
    const int t = static_cast<int>(h.size());
    if (t == g.T) return regret_of_history(g, h);
    const auto it = table.find(h);
    if (it == table.end())
      fail_invalid("strategy table has no entry for history \"" + history_key(h) + "\"");
    const Vec& q = it->second;
    if (static_cast<int>(q.size()) != g.nf())
      fail_invalid("strategy table entry for \"" + history_key(h) + "\" has " +
                   std::to_string(q.size()) + " weights; |F|=" + std::to_string(g.nf()));
    double best = 0;
    for (int x = 0; x < g.nx(); ++x) {
      double v = 0;
      for (int f = 0; f < g.nf(); ++f) {
        h.emplace_back(f, x);
        v += q[f] * rec();
        h.pop_back();
      }
      if (x == 0 || v > best) best = v;
    }
    return best;
  };
  return rec();
}

namespace {

void check_mixed(const Vec& q, int n, const std::string& where) {
  if (static_cast<int>(q.size()) != n)
    fail_invalid(where + " has " + std::to_string(q.size()) + " weights; expected " +
                 std::to_string(n));
  double sum = 0;
  for (double w : q) {
    if (w < -1e-12) fail_invalid(where + " has a negative weight");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) fail_invalid(where + " weights sum to " + fmt12(sum));
}

void check_fixed_seq(const std::vector<int>& seq, int T, int n, const char* side) {
  if (static_cast<int>(seq.size()) != T)
    fail_invalid(std::string(side) + " fixed policy has " + std::to_string(seq.size()) +
                 " rounds; horizon T=" + std::to_string(T));
  for (int a : seq)
    if (a < 0 || a >= n)
      fail_invalid(std::string(side) + " fixed policy indexes action " + std::to_string(a) +
                   " outside [0, " + std::to_string(n) + ")");
}

// Player table that best-responds to a non-adaptive adversary policy.
StrategyTable resolve_player_br(const GameSpec& g, const AdversaryPolicy& adv,
                                const ValueOptions& opt) {
  check_recursion_budget(g, opt.budget);
  StrategyTable out;
  History h;
  const std::function<double()> rec = [&]() -> double {
    const int t = static_cast<int>(h.size());
    if (t == g.T) return regret_of_history(g, h);
    Vec px(static_cast<std::size_t>(g.nx()), 0.0);
    switch (adv.kind) {
      case AdversaryPolicy::Kind::uniform:
        std::fill(px.begin(), px.end(), 1.0 / g.nx());
        break;
      case AdversaryPolicy::Kind::fixed:
        px[static_cast<std::size_t>(adv.fixed[t])] = 1.0;
        break;
      case AdversaryPolicy::Kind::table: {
        const auto it = adv.table.find(h);
        if (it == adv.table.end())
          fail_invalid("adversary table has no entry for history \"" + history_key(h) + "\"");
        px = it->second;
        break;
      }
      case AdversaryPolicy::Kind::best_response:
        fail_invalid("player best-response needs a non-adaptive adversary policy");
    }
    double best = 0;
    int arg = 0;
    for (int f = 0; f < g.nf(); ++f) {
      double v = 0;
      for (int x = 0; x < g.nx(); ++x) {
        if (px[x] == 0.0) continue;
        h.emplace_back(f, x);
        v += px[x] * rec();
        h.pop_back();
      }
      if (f == 0 || v < best) { best = v; arg = f; }
    }
    Vec q(static_cast<std::size_t>(g.nf()), 0.0);
    q[arg] = 1.0;
    out[h] = std::move(q);
    return best;
  };
  rec();
  return out;
}

// Adversary table that best-responds to a fully resolved player table.
StrategyTable resolve_adversary_br(const GameSpec& g, const StrategyTable& player,
                                   const ValueOptions& opt) {
  check_recursion_budget(g, opt.budget);
  StrategyTable out;
  History h;
  const std::function<double()> rec = [&]() -> double {
    const int t = static_cast<int>(h.size());
    if (t == g.T) return regret_of_history(g, h);
    const auto it = player.find(h);
    if (it == player.end())
      fail_invalid("player table has no entry for history \"" + history_key(h) + "\"");
    const Vec& q = it->second;
    double best = 0;
    int arg = 0;
    for (int x = 0; x < g.nx(); ++x) {
      double v = 0;
      for (int f = 0; f < g.nf(); ++f) {
        h.emplace_back(f, x);
        v += q[f] * rec();
        h.pop_back();
      }
      if (x == 0 || v > best) { best = v; arg = x; }
    }
    Vec p(static_cast<std::size_t>(g.nx()), 0.0);
    p[arg] = 1.0;
    out[h] = std::move(p);
    return best;
  };
  rec();
  return out;
}

// Policies after best-response/minimax resolution. Materialised tables live in
// ptab/atab; when own_* is false the caller's original table is authoritative.
struct ResolvedPolicies {
  PlayerPolicy::Kind pk;
  AdversaryPolicy::Kind ak;
  StrategyTable ptab, atab;
  bool own_ptab = false, own_atab = false;
};

ResolvedPolicies resolve(const GameSpec& g, const PlayerPolicy& pl, const AdversaryPolicy& adv,
                         const ValueOptions& opt) {
  ResolvedPolicies r;
  r.pk = pl.kind;
  r.ak = adv.kind;
  if (pl.kind == PlayerPolicy::Kind::best_response &&
      adv.kind == AdversaryPolicy::Kind::best_response)
    fail_invalid("player and adversary cannot both be best-response");
  if (pl.kind == PlayerPolicy::Kind::fixed) check_fixed_seq(pl.fixed, g.T, g.nf(), "player");
  if (adv.kind == AdversaryPolicy::Kind::fixed)
    check_fixed_seq(adv.fixed, g.T, g.nx(), "adversary");

  if (pl.kind == PlayerPolicy::Kind::minimax) {
    r.ptab = extract_minimax_strategy(g, opt);
    r.own_ptab = true;
    r.pk = PlayerPolicy::Kind::table;
  } else if (pl.kind == PlayerPolicy::Kind::best_response) {
    r.ptab = resolve_player_br(g, adv, opt);
    r.own_ptab = true;
    r.pk = PlayerPolicy::Kind::table;
  }

  if (adv.kind == AdversaryPolicy::Kind::best_response) {
    // Materialise the player as a table first when it is uniform/fixed.
    if (r.pk == PlayerPolicy::Kind::uniform || r.pk == PlayerPolicy::Kind::fixed) {
      check_recursion_budget(g, opt.budget);
      StrategyTable full;
      History h;
      const std::function<void()> fill = [&]() {
        const int t = static_cast<int>(h.size());
        if (t == g.T) return;
        Vec q(static_cast<std::size_t>(g.nf()),
              r.pk == PlayerPolicy::Kind::uniform ? 1.0 / g.nf() : 0.0);
        if (r.pk == PlayerPolicy::Kind::fixed) q[static_cast<std::size_t>(pl.fixed[t])] = 1.0;
        full[h] = std::move(q);
        for (int f = 0; f < g.nf(); ++f)
          for (int x = 0; x < g.nx(); ++x) {
            h.emplace_back(f, x);
            fill();
            h.pop_back();
          }
      };
      fill();
      r.ptab = std::move(full);
      r.own_ptab = true;
      r.pk = PlayerPolicy::Kind::table;
    }
    r.atab = resolve_adversary_br(g, r.own_ptab ? r.ptab : pl.table, opt);
    r.own_atab = true;
    r.ak = AdversaryPolicy::Kind::table;
  }
  return r;
}

const Vec& table_lookup(const StrategyTable& tab, const History& h, const char* side) {
  const auto it = tab.find(h);
  if (it == tab.end())
    fail_invalid(std::string(side) + " table has no entry for history \"" + history_key(h) +
                 "\"");
  return it->second;
}

History play_once(const GameSpec& g, const PlayerPolicy& pl, const AdversaryPolicy& adv,
                  const ResolvedPolicies& r, Rng& rng) {
  const StrategyTable& ptab = r.own_ptab ? r.ptab : pl.table;
  const StrategyTable& atab = r.own_atab ? r.atab : adv.table;
  History h;
  Vec q(static_cast<std::size_t>(g.nf()));
  for (int t = 0; t < g.T; ++t) {
    int f;
    switch (r.pk) {
      case PlayerPolicy::Kind::uniform:
        std::fill(q.begin(), q.end(), 1.0 / g.nf());
        f = rng.next_index(q);
        break;
      case PlayerPolicy::Kind::fixed:
        f = pl.fixed[t];
        break;
      default: {
        const Vec& qt = table_lookup(ptab, h, "player");
        check_mixed(qt, g.nf(), "player mixed action at \"" + history_key(h) + "\"");
        f = rng.next_index(qt);
        break;
      }
    }
    int x;
    switch (r.ak) {
      case AdversaryPolicy::Kind::uniform:
        x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(g.nx())));
        break;
      case AdversaryPolicy::Kind::fixed:
        x = adv.fixed[t];
        break;
      default: {
        const Vec& pt = table_lookup(atab, h, "adversary");
        check_mixed(pt, g.nx(), "adversary mixed action at \"" + history_key(h) + "\"");
        x = rng.next_index(pt);
        break;
      }
    }
    h.emplace_back(f, x);
  }
  return h;
}

}  // namespace

SimResult simulate(const GameSpec& g, const PlayerPolicy& pl, const AdversaryPolicy& adv,
                   int reps, std::uint64_t seed, const ValueOptions& opt) {
  if (reps < 1) fail_invalid("simulate needs reps >= 1");
  const ResolvedPolicies r = resolve(g, pl, adv, opt);
  SimResult out;
  out.regrets.reserve(static_cast<std::size_t>(reps));
  double sum = 0, sumsq = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(seed, static_cast<std::uint64_t>(rep));
    const double reg = regret_of_history(g, play_once(g, pl, adv, r, rng));
    out.regrets.push_back(reg);
    sum += reg;
    sumsq += reg * reg;
  }
  out.mean = sum / reps;
  if (reps > 1) {
    const double var = std::max(0.0, (sumsq - sum * sum / reps) / (reps - 1));
    out.se = std::sqrt(var / reps);
  }
  return out;
}

History run_episode(const GameSpec& g, const PlayerPolicy& pl, const AdversaryPolicy& adv,
                    std::uint64_t seed, const ValueOptions& opt) {
  const ResolvedPolicies r = resolve(g, pl, adv, opt);
  Rng rng(seed, 0);
  return play_once(g, pl, adv, r, rng);
}

}  // namespace olab
