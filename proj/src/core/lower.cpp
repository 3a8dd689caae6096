#include "core/lower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "core/common.hpp"

namespace olab {

namespace {

void check_distribution(const Vec& p, int n, const std::string& what) {
  if (static_cast<int>(p.size()) != n)
    fail_invalid(what + " needs one probability per adversary action");
  double sum = 0;
  for (double v : p) {
    if (v < -1e-12) fail_invalid(what + " has a negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) fail_invalid(what + " does not sum to 1");
}

double history_count(const GameSpec& g) {
  const double branch = static_cast<double>(g.nf()) * g.nx();
  double total = 1, level = 1;
  for (int t = 0; t < g.T; ++t) {
    level *= branch;
    total += level;
  }
  return total;
}

}  // namespace

bool check_equalizer(const GameSpec& g, const StrategyTable& adversary) {
  const double nodes = history_count(g);
  if (nodes > 1e7)
    fail_budget("equalizer check would enumerate about " + fmt12(nodes) +
                " histories; the budget is 10000000");

  // Against the fixed adversary the player faces a Markov decision problem, so
  // the extreme pure strategies come from one min/max backward pass.
  struct Rec {
    const GameSpec& g;
    const StrategyTable& adv;
    std::pair<double, double> run(History& h, int t) {
      if (t == g.T) {
        const double r = regret_of_history(g, h);
        return {r, r};
      }
      const auto it = adv.find(h);
      if (it == adv.end())
        fail_invalid("adversary table is missing history '" + history_key(h) + "'");
      check_distribution(it->second, g.nx(), "adversary mixture at '" + history_key(h) + "'");
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (int f = 0; f < g.nf(); ++f) {
        double elo = 0, ehi = 0;
        for (int x = 0; x < g.nx(); ++x) {
          const double px = it->second[x];
          if (px == 0) continue;
          h.push_back({f, x});
          const auto [clo, chi] = run(h, t + 1);
          h.pop_back();
          elo += px * clo;
          ehi += px * chi;
        }
        lo = std::min(lo, elo);
        hi = std::max(hi, ehi);
      }
      return {lo, hi};
    }
  } rec{g, adversary};
  History h;
  const auto [lo, hi] = rec.run(h, 0);
  return hi - lo <= 1e-9;
}

StrategyTable stationary_adversary(const GameSpec& g, const Vec& p) {
  check_distribution(p, g.nx(), "stationary adversary mixture");
  const double nodes = history_count(g);
  if (nodes > 1e7)
    fail_budget("stationary adversary table would hold about " + fmt12(nodes) +
                " histories; the budget is 10000000");
  StrategyTable table;
  History h;
  const auto fill = [&](auto&& self, int t) -> void {
    if (t == g.T) return;
    table[h] = p;
    for (int f = 0; f < g.nf(); ++f)
      for (int x = 0; x < g.nx(); ++x) {
        h.push_back({f, x});
        self(self, t + 1);
        h.pop_back();
      }
  };
  fill(fill, 0);
  return table;
}

// ---------------------------------------------------------------------------
// Sequential Rademacher lower bounds

double rademacher_tree_sup(const std::vector<std::vector<double>>& val, int T,
                           long long budget) {
  if (val.empty() || val[0].empty()) fail_invalid("rademacher_tree_sup needs a nonempty table");
  const int nf = static_cast<int>(val.size());
  const int nc = static_cast<int>(val[0].size());
  for (const auto& row : val)
    if (static_cast<int>(row.size()) != nc)
      fail_invalid("rademacher_tree_sup rows must share one width");
  if (T < 1) fail_invalid("rademacher_tree_sup needs T >= 1");
  const double cost = std::pow(2.0 * nc, T);
  if (cost > static_cast<double>(budget))
    fail_budget("rademacher tree recursion would take about " + fmt12(cost) +
                " steps; the budget is " + std::to_string(budget));

  // s holds the per-f signed sums; the optimal tree picks each node's choice
  // independently of the other subtree, which is what the max-over-c encodes.
  const auto rec = [&](auto&& self, int t, const Vec& s) -> double {
    if (t == T) {
      double m = s[0];
      for (double v : s) m = std::max(m, v);
      return m / T;
    }
    double best = -std::numeric_limits<double>::infinity();
    Vec up(nf), dn(nf);
    for (int c = 0; c < nc; ++c) {
      for (int f = 0; f < nf; ++f) {
        up[f] = s[f] + val[f][c];
        dn[f] = s[f] - val[f][c];
      }
      best = std::max(best, 0.5 * (self(self, t + 1, up) + self(self, t + 1, dn)));
    }
    return best;
  };
  return rec(rec, 0, Vec(nf, 0.0));
}

double supervised_lower(const std::vector<std::vector<double>>& fvals, int T) {
  for (const auto& row : fvals)
    for (double v : row)
      if (v < -1 || v > 1) fail_invalid("supervised_lower requires function values in [-1,1]");
  return rademacher_tree_sup(fvals, T);
}

GameSpec make_supervised_game(const std::vector<std::string>& z_labels,
                              const std::vector<std::vector<double>>& fvals, int T) {
  if (fvals.empty() || fvals[0].empty())
    fail_invalid("supervised game needs a nonempty function table");
  const int nf = static_cast<int>(fvals.size());
  const int nz = static_cast<int>(fvals[0].size());
  if (static_cast<int>(z_labels.size()) != nz)
    fail_invalid("supervised game needs one label per instance-space point");
  for (const auto& row : fvals) {
    if (static_cast<int>(row.size()) != nz)
      fail_invalid("supervised game function rows must share one width");
    for (double v : row)
      if (v < -1 || v > 1) fail_invalid("supervised game requires function values in [-1,1]");
  }

  GameSpec g;
  g.T = T;
  for (int f = 0; f < nf; ++f) g.F.push_back("f" + std::to_string(f));
  for (int z = 0; z < nz; ++z) {
    g.X.push_back(z_labels[z] + "+");
    g.X.push_back(z_labels[z] + "-");
  }
  g.payoff.k = 1;
  g.payoff.values.resize(nf);
  for (int f = 0; f < nf; ++f) {
    g.payoff.values[f].resize(2 * nz);
    for (int z = 0; z < nz; ++z) {
      g.payoff.values[f][2 * z] = Vec{std::abs(fvals[f][z] - 1.0)};
      g.payoff.values[f][2 * z + 1] = Vec{std::abs(fvals[f][z] + 1.0)};
    }
  }
  g.agg.kind = Aggregator::Kind::average;
  for (int f = 0; f < nf; ++f) {
    TransformSeq seq;
    seq.name = "to:f" + std::to_string(f);
    TransformStep step;
    step.kind = TransformStep::Kind::departure;
    step.map.assign(nf, f);
    seq.steps.push_back(std::move(step));
    g.phi.seqs.push_back(std::move(seq));
  }
  g.validate();
  return g;
}

double linear_lower(const std::vector<Vec>& fs, const std::vector<Vec>& xs, int T) {
  if (fs.empty() || xs.empty()) fail_invalid("linear_lower needs nonempty vector sets");
  const std::size_t d = fs[0].size();
  if (d == 0) fail_invalid("linear_lower needs vectors of positive dimension");
  for (const auto& f : fs)
    if (f.size() != d) fail_invalid("linear_lower player vectors must share one dimension");
  for (const auto& x : xs)
    if (x.size() != d) fail_invalid("linear_lower adversary vectors must share one dimension");
  std::vector<std::vector<double>> val(fs.size(), std::vector<double>(xs.size()));
  for (std::size_t f = 0; f < fs.size(); ++f)
    for (std::size_t x = 0; x < xs.size(); ++x) {
      double s = 0;
      for (std::size_t j = 0; j < d; ++j) s += fs[f][j] * xs[x][j];
      val[f][x] = s;
    }
  return rademacher_tree_sup(val, T);
}

GameSpec make_linear_game(const std::vector<Vec>& fs, const std::vector<Vec>& xs, int T) {
  if (fs.empty() || xs.empty()) fail_invalid("linear game needs nonempty vector sets");
  const std::size_t d = fs[0].size();
  if (d == 0) fail_invalid("linear game needs vectors of positive dimension");
  for (const auto& f : fs)
    if (f.size() != d) fail_invalid("linear game player vectors must share one dimension");
  for (const auto& x : xs)
    if (x.size() != d) fail_invalid("linear game adversary vectors must share one dimension");

  // The lower bound's adversary plays eps_t * x, so the game must offer both
  // signs of every x; duplicates after negation are dropped.
  std::vector<Vec> sym;
  for (const auto& x : xs) {
    Vec neg(d);
    for (std::size_t j = 0; j < d; ++j) neg[j] = x[j] == 0 ? 0.0 : -x[j];
    for (const Vec* cand : {&x, static_cast<const Vec*>(&neg)}) {
      bool seen = false;
      for (const auto& have : sym)
        if (have == *cand) {
          seen = true;
          break;
        }
      if (!seen) sym.push_back(*cand);
    }
  }

  GameSpec g;
  g.T = T;
  const int nf = static_cast<int>(fs.size());
  for (int f = 0; f < nf; ++f) g.F.push_back("f" + std::to_string(f));
  for (std::size_t x = 0; x < sym.size(); ++x) g.X.push_back("x" + std::to_string(x));
  g.payoff.k = 1;
  g.payoff.values.resize(nf);
  for (int f = 0; f < nf; ++f) {
    g.payoff.values[f].resize(sym.size());
    for (std::size_t x = 0; x < sym.size(); ++x) {
      double s = 0;
      for (std::size_t j = 0; j < d; ++j) s += fs[f][j] * sym[x][j];
      g.payoff.values[f][x] = Vec{s};
    }
  }
  g.agg.kind = Aggregator::Kind::average;
  for (int f = 0; f < nf; ++f) {
    TransformSeq seq;
    seq.name = "to:f" + std::to_string(f);
    TransformStep step;
    step.kind = TransformStep::Kind::departure;
    step.map.assign(nf, f);
    seq.steps.push_back(std::move(step));
    g.phi.seqs.push_back(std::move(seq));
  }
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// Walsh-Paley suprema

namespace {

void check_h(const std::vector<Vec>& H) {
  if (H.empty()) fail_invalid("walsh_paley_sup needs a nonempty value set");
  const std::size_t k = H[0].size();
  if (k == 0) fail_invalid("walsh_paley_sup needs vectors of positive dimension");
  for (const auto& h : H)
    if (h.size() != k) fail_invalid("walsh_paley_sup vectors must share one dimension");
}

double wp_exhaustive(const std::vector<Vec>& H, const NormSpec& norm, int T) {
  const std::size_t k = H[0].size();
  // The sup decomposes: both sign children of a node are optimized
  // independently, so one recursion on the signed partial sum is exact.
  const auto rec = [&](auto&& self, int t, const Vec& s) -> double {
    if (t == T) return norm_of(norm, s) / T;
    double best = -std::numeric_limits<double>::infinity();
    Vec up(k), dn(k);
    for (const auto& h : H) {
      for (std::size_t j = 0; j < k; ++j) {
        up[j] = s[j] + h[j];
        dn[j] = s[j] - h[j];
      }
      best = std::max(best, 0.5 * (self(self, t + 1, up) + self(self, t + 1, dn)));
    }
    return best;
  };
  return rec(rec, 0, Vec(k, 0.0));
}

double wp_tree_objective(const std::vector<Vec>& nodes, const NormSpec& norm, int T, int k) {
  const long long paths = 1LL << T;
  double total = 0;
  Vec s(k);
  for (long long eps = 0; eps < paths; ++eps) {
    std::fill(s.begin(), s.end(), 0.0);
    std::size_t node = 0;
    for (int t = 0; t < T; ++t) {
      const int sign = (eps >> t) & 1 ? +1 : -1;
      for (int j = 0; j < k; ++j) s[j] += sign * nodes[node][j];
      node = 2 * node + (sign < 0 ? 1 : 2);
    }
    total += norm_of(norm, s) / T;
  }
  return total / static_cast<double>(paths);
}

// Returns a failure message when the exhaustive tree count |H|^(2^T-1) — or
// the 2^T sign paths one evaluation walks — exceeds the budget; empty if ok.
std::string wp_exhaustive_over_budget(std::size_t hsize, int T, long long budget) {
  const double paths = std::pow(2.0, T);
  if (paths > static_cast<double>(budget))
    return "exhaustive walsh_paley_sup walks about " + fmt12(paths) +
           " sign paths; the budget is " + std::to_string(budget);
  if (hsize >= 2 && T >= 32)
    return "exhaustive walsh_paley_sup counts |H|^(2^T-1) = " + std::to_string(hsize) + "^(2^" +
           std::to_string(T) + "-1) trees; the budget is " + std::to_string(budget);
  std::string count;
  if (hsize >= 2 &&
      pow_budget_exceeded(static_cast<long long>(hsize), static_cast<int>((1LL << T) - 1), budget,
                          count))
    return "exhaustive walsh_paley_sup counts |H|^(2^T-1) = " + count +
           " trees; the budget is " + std::to_string(budget);
  return {};
}

double wp_greedy(const std::vector<Vec>& H, const NormSpec& norm, int T) {
  const int k = static_cast<int>(H[0].size());
  const long long nnodes = (1LL << T) - 1;
  const double sweep_cost = static_cast<double>(nnodes) * H.size() * std::pow(2.0, T) * T;
  if (nnodes > (1 << 20) || sweep_cost > 1e9)
    fail_budget("greedy walsh_paley_sup sweep would take about " + fmt12(sweep_cost) +
                " steps; the budget is 1e9 (reduce T)");
  std::vector<Vec> nodes(static_cast<std::size_t>(nnodes), H[0]);
  double best = wp_tree_objective(nodes, norm, T, k);
  for (int pass = 0; pass < 50; ++pass) {
    bool improved = false;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      for (const auto& h : H) {
        if (h == nodes[n]) continue;
        const Vec keep = nodes[n];
        nodes[n] = h;
        const double cand = wp_tree_objective(nodes, norm, T, k);
        if (cand > best + 1e-15) {
          best = cand;
          improved = true;
        } else {
          nodes[n] = keep;
        }
      }
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace

double walsh_paley_sup(const std::vector<Vec>& H, const NormSpec& norm, int T, WpMode mode,
                       long long budget) {
  check_h(H);
  norm.validate();
  if (T < 1) fail_invalid("walsh_paley_sup needs T >= 1");
  if (mode == WpMode::exhaustive) {
    const std::string over = wp_exhaustive_over_budget(H.size(), T, budget);
    if (!over.empty()) fail_budget(over + " (use greedy mode)");
    return wp_exhaustive(H, norm, T);
  }
  return wp_greedy(H, norm, T);
}

GameSpec make_blackwell_game(const std::vector<Vec>& H, const NormSpec& norm, int T) {
  check_h(H);
  norm.validate();
  const int k = static_cast<int>(H[0].size());
  // The lower bound's adversary plays a random sign times a tree value, so
  // both signs of every element must be playable.
  for (std::size_t i = 0; i < H.size(); ++i) {
    bool found = false;
    for (const auto& other : H) {
      bool neg = true;
      for (int j = 0; j < k && neg; ++j) neg = other[j] == -H[i][j];
      if (neg) {
        found = true;
        break;
      }
    }
    if (!found)
      fail_invalid("blackwell lower-bound game needs H closed under negation; element " +
                   std::to_string(i) + " has no negative in H");
  }
  GameSpec g;
  g.T = T;
  g.F = {"-1", "+1"};
  for (std::size_t x = 0; x < H.size(); ++x) g.X.push_back("x" + std::to_string(x));
  g.payoff.k = k;
  g.payoff.values.resize(2);
  for (int fi = 0; fi < 2; ++fi) {
    const double f = fi == 0 ? -1.0 : 1.0;
    g.payoff.values[fi].resize(H.size());
    for (std::size_t x = 0; x < H.size(); ++x) {
      Vec v(k);
      for (int j = 0; j < k; ++j) v[j] = f * H[x][j];
      g.payoff.values[fi][x] = std::move(v);
    }
  }
  g.agg.kind = Aggregator::Kind::distance_to_set;
  g.agg.norm = norm;
  g.agg.target.vertices = {Vec(k, 0.0)};
  TransformSeq seq;
  seq.name = "zero";
  TransformStep step;
  step.kind = TransformStep::Kind::payoff_override;
  step.table.assign(2, std::vector<Vec>(H.size(), Vec(k, 0.0)));
  seq.steps.push_back(std::move(step));
  g.phi.seqs.push_back(std::move(seq));
  g.validate();
  return g;
}

BlackwellLowerReport blackwell_lower_check(const std::vector<Vec>& H, const NormSpec& norm,
                                           int T) {
  BlackwellLowerReport rep;
  const GameSpec g = make_blackwell_game(H, norm, T);
  rep.value = exact_value(g, {});
  const bool big = !wp_exhaustive_over_budget(H.size(), T, 10'000'000).empty();
  rep.mode_used = big ? WpMode::greedy : WpMode::exhaustive;
  rep.walsh_paley = walsh_paley_sup(H, norm, T, rep.mode_used);
  rep.holds = rep.value >= 0.5 * rep.walsh_paley - 1e-9;
  return rep;
}

}  // namespace olab
