#include "core/fuzz.hpp"

#include <algorithm>
#include <cmath>

#include "core/bounds.hpp"
#include "core/conc.hpp"
#include "core/dims.hpp"
#include "core/games.hpp"
#include "core/oracle.hpp"
#include "core/radcomp.hpp"
#include "core/rng.hpp"
#include "core/value.hpp"

namespace olab {

namespace {

std::vector<std::string> labels(const char* stem, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

void track(BatteryReport& rep, bool ok, double margin, const std::string& what) {
  ++rep.count;
  if (!ok) ++rep.failures;
  if (rep.count == 1 || margin > rep.worst) {
    rep.worst = margin;
    rep.worst_what = what;
  }
}

}  // namespace

GameSpec random_triplex_game(std::uint64_t seed, long long index) {
  Rng rng(seed, 0x747269ull * 1024 + static_cast<std::uint64_t>(index));
  GameSpec g;
  const int nf = 2 + static_cast<int>(rng.next_below(2));
  const int nx = 2 + static_cast<int>(rng.next_below(2));
  g.T = 1 + static_cast<int>(rng.next_below(3));
  g.F = labels("f", nf);
  g.X = labels("x", nx);
  g.payoff.k = 1;
  g.payoff.values.resize(nf);
  for (int f = 0; f < nf; ++f) {
    g.payoff.values[f].resize(nx);
    for (int x = 0; x < nx; ++x) g.payoff.values[f][x] = Vec{double(rng.next_below(2))};
  }
  g.agg.kind = Aggregator::Kind::average;
  const int nmaps = 1 + static_cast<int>(rng.next_below(nf));
  std::vector<int> targets(nf);
  for (int f = 0; f < nf; ++f) targets[f] = f;
  for (int f = nf - 1; f > 0; --f)
    std::swap(targets[f], targets[rng.next_below(static_cast<std::size_t>(f) + 1)]);
  for (int i = 0; i < nmaps; ++i) {
    TransformSeq seq;
    seq.name = "to:f" + std::to_string(targets[i]);
    TransformStep st;
    st.kind = TransformStep::Kind::departure;
    st.map.assign(nf, targets[i]);
    seq.steps.push_back(std::move(st));
    g.phi.seqs.push_back(std::move(seq));
  }
  g.validate();
  return g;
}

BatteryReport battery_triplex(long long count, std::uint64_t seed) {
  BatteryReport rep;
  for (long long i = 0; i < count; ++i) {
    const GameSpec g = random_triplex_game(seed, i);
    const TriplexReport tri = triplex_certificate_linear(g);
    track(rep, tri.holds, tri.val - 2.0 * tri.rad,
          "game " + std::to_string(i) + " (val " + fmt12(tri.val) + ", rad " + fmt12(tri.rad) +
              ")");
  }
  rep.holds = rep.failures == 0;
  return rep;
}

BatteryReport battery_finite_class(long long count, std::uint64_t seed) {
  BatteryReport rep;
  for (long long i = 0; i < count; ++i) {
    Rng rng(seed, 0x747265ull * 1024 + static_cast<std::uint64_t>(i));
    const int T = 1 + static_cast<int>(rng.next_below(6));
    const int nv = 1 + static_cast<int>(rng.next_below(8));
    std::vector<RealTree> trees(nv);
    for (auto& tr : trees) {
      tr.T = T;
      tr.nodes.resize((1u << T) - 1);
      for (auto& v : tr.nodes) v = 2.0 * rng.next_unit() - 1.0;
    }
    const double emax = exact_expected_max(trees);
    const double bound = finite_class_bound(trees);
    track(rep, emax <= bound + 1e-9, emax - bound,
          "tree set " + std::to_string(i) + " (T " + std::to_string(T) + ", |V| " +
              std::to_string(nv) + ")");
  }
  rep.holds = rep.failures == 0;
  return rep;
}

std::vector<GameSpec> fixture_games() {
  std::vector<GameSpec> out;
  for (int i = 0; i < 30; ++i) {
    Rng rng(2718, 0x666978ull * 1024 + static_cast<std::uint64_t>(i));
    GameSpec g;
    const int nf = 2 + static_cast<int>(rng.next_below(3));
    const int nx = 2 + static_cast<int>(rng.next_below(3));
    g.T = 1 + static_cast<int>(rng.next_below(3));
    g.F = labels("f", nf);
    g.X = labels("x", nx);
    const int agg_pick = static_cast<int>(rng.next_below(3));
    const int k = agg_pick == 0 ? 1 : 1 + static_cast<int>(rng.next_below(2));
    g.payoff.k = k;
    g.payoff.values.resize(nf);
    for (int f = 0; f < nf; ++f) {
      g.payoff.values[f].resize(nx);
      for (int x = 0; x < nx; ++x) {
        Vec v(k);
        for (int j = 0; j < k; ++j)
          v[j] = (static_cast<double>(rng.next_below(17)) - 8.0) / 8.0;
        g.payoff.values[f][x] = std::move(v);
      }
    }
    NormSpec norm;
    norm.kind = rng.next_below(2) == 0 ? NormSpec::Kind::l1 : NormSpec::Kind::linf;
    if (agg_pick == 0) {
      g.agg.kind = Aggregator::Kind::average;
    } else if (agg_pick == 1) {
      g.agg.kind = Aggregator::Kind::norm_of_average;
      g.agg.norm = norm;
    } else {
      g.agg.kind = Aggregator::Kind::distance_to_set;
      g.agg.norm = norm;
      const int nvert = 1 + static_cast<int>(rng.next_below(2));
      for (int vtx = 0; vtx < nvert; ++vtx) {
        Vec v(k);
        for (int j = 0; j < k; ++j)
          v[j] = (static_cast<double>(rng.next_below(9)) - 4.0) / 8.0;
        g.agg.target.vertices.push_back(std::move(v));
      }
    }
    const int extra = 1 + static_cast<int>(rng.next_below(2));
    std::vector<std::vector<int>> maps;
    maps.emplace_back();
    for (int f = 0; f < nf; ++f) maps.back().push_back(f);
    for (int e = 0; e < extra; ++e) {
      std::vector<int> m(nf);
      for (int f = 0; f < nf; ++f) m[f] = static_cast<int>(rng.next_below(nf));
      if (std::find(maps.begin(), maps.end(), m) == maps.end()) maps.push_back(m);
    }
    for (std::size_t s = 0; s < maps.size(); ++s) {
      TransformSeq seq;
      seq.name = s == 0 ? "id" : "m" + std::to_string(s);
      TransformStep st;
      st.kind = TransformStep::Kind::departure;
      st.map = maps[s];
      seq.steps.push_back(std::move(st));
      g.phi.seqs.push_back(std::move(seq));
    }
    g.validate();
    out.push_back(std::move(g));
  }
  return out;
}

BatteryReport battery_rational() {
  BatteryReport rep;
  const auto fixtures = fixture_games();
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const double fl = exact_value(fixtures[i]);
    const double ra = rat_to_double(exact_value_rational(fixtures[i]));
    const double diff = std::abs(fl - ra);
    track(rep, diff <= 1e-8, diff, "fixture " + std::to_string(i));
  }
  rep.holds = rep.failures == 0;
  return rep;
}

BatteryReport battery_markov() {
  BatteryReport rep;
  const auto fixtures = fixture_games();
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const double val = exact_value(fixtures[i]);
    for (double theta : {0.1, 0.25, 0.5}) {
      const double tv = exact_theta_value(fixtures[i], theta);
      track(rep, tv <= val / theta + 1e-9, tv - val / theta,
            "fixture " + std::to_string(i) + " theta " + fmt12(theta));
    }
  }
  rep.holds = rep.failures == 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Sauer enumeration

namespace {

// Lexicographically-least representative of the table's orbit under row and
// column permutations. The verified property is invariant under relabelling
// F and X, so checking one representative per orbit checks every instance.
bool is_canonical_table(const std::vector<std::vector<int>>& tab) {
  const int nf = static_cast<int>(tab.size());
  const int nx = static_cast<int>(tab[0].size());
  std::vector<int> rp(nf), cp(nx);
  for (int i = 0; i < nf; ++i) rp[i] = i;
  const auto flat_less = [&](const std::vector<int>& r, const std::vector<int>& c) {
    for (int f = 0; f < nf; ++f)
      for (int x = 0; x < nx; ++x) {
        const int a = tab[r[f]][c[x]], b = tab[f][x];
        if (a != b) return a < b;
      }
    return false;
  };
  do {
    for (int i = 0; i < nx; ++i) cp[i] = i;
    do {
      if (flat_less(rp, cp)) return false;
    } while (std::next_permutation(cp.begin(), cp.end()));
  } while (std::next_permutation(rp.begin(), rp.end()));
  return true;
}

GameSpec sauer_game(int nf, int nx, int T, const std::vector<std::vector<int>>& tab,
                    const std::vector<std::vector<int>>& maps) {
  GameSpec g;
  g.T = T;
  g.F = labels("f", nf);
  g.X = labels("x", nx);
  g.payoff.k = 1;
  g.payoff.values.resize(nf);
  for (int f = 0; f < nf; ++f) {
    g.payoff.values[f].resize(nx);
    for (int x = 0; x < nx; ++x) g.payoff.values[f][x] = Vec{double(tab[f][x])};
  }
  g.agg.kind = Aggregator::Kind::average;
  for (std::size_t s = 0; s < maps.size(); ++s) {
    TransformSeq seq;
    seq.name = "m" + std::to_string(s);
    TransformStep st;
    st.kind = TransformStep::Kind::departure;
    st.map = maps[s];
    seq.steps.push_back(std::move(st));
    g.phi.seqs.push_back(std::move(seq));
  }
  g.validate();
  return g;
}

}  // namespace

BatteryReport battery_sauer(int threads) {
  BatteryReport rep;
  for (int nf = 1; nf <= 3; ++nf)
    for (int nx = 1; nx <= 3; ++nx) {
      // All binary tables, canonical under relabelling.
      std::vector<std::vector<std::vector<int>>> tables;
      const int cells = nf * nx;
      for (int mask = 0; mask < (1 << cells); ++mask) {
        std::vector<std::vector<int>> tab(nf, std::vector<int>(nx));
        for (int c = 0; c < cells; ++c) tab[c / nx][c % nx] = (mask >> c) & 1;
        if (is_canonical_table(tab)) tables.push_back(std::move(tab));
      }
      // Departure maps F -> F.
      std::vector<std::vector<int>> all_maps;
      {
        std::vector<int> m(nf, 0);
        for (;;) {
          all_maps.push_back(m);
          int d = 0;
          while (d < nf && ++m[d] == nf) m[d++] = 0;
          if (d == nf) break;
        }
      }
      // Multi-map sets blow up combinatorially at |F| = 3 (C(27,3) subsets per
      // table); there they range over identity + the constant maps instead.
      std::vector<std::vector<int>> pool;
      if (nf <= 2) {
        pool = all_maps;
      } else {
        std::vector<int> id(nf);
        for (int f = 0; f < nf; ++f) id[f] = f;
        pool.push_back(id);
        for (int f = 0; f < nf; ++f) pool.emplace_back(nf, f);
      }
      std::vector<std::vector<std::vector<int>>> map_sets;
      for (const auto& m : all_maps) map_sets.push_back({m});
      for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a + 1; b < pool.size(); ++b) {
          map_sets.push_back({pool[a], pool[b]});
          for (std::size_t c = b + 1; c < pool.size(); ++c)
            map_sets.push_back({pool[a], pool[b], pool[c]});
        }

      const std::int64_t jobs = static_cast<std::int64_t>(tables.size());
      std::vector<BatteryReport> parts(static_cast<std::size_t>(jobs));
      parallel_chunks(jobs, 1, threads, [&](std::int64_t ci, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t ti = lo; ti < hi; ++ti) {
          auto& part = parts[static_cast<std::size_t>(ci)];
          for (const auto& maps : map_sets)
            for (int T = 1; T <= 4; ++T) {
              const GameSpec g = sauer_game(nf, nx, T, tables[static_cast<std::size_t>(ti)], maps);
              const SauerReport sr = verify_sauer(g, T);
              track(part, sr.holds,
                    static_cast<double>(sr.zero_cover) - sr.bound_approx,
                    "nf" + std::to_string(nf) + " nx" + std::to_string(nx) + " T" +
                        std::to_string(T) + " table " + std::to_string(ti));
            }
        }
      });
      for (const auto& part : parts) {
        if (part.count == 0) continue;
        if (rep.count == 0 || part.worst > rep.worst) {
          rep.worst = part.worst;
          rep.worst_what = part.worst_what;
        }
        rep.count += part.count;
        rep.failures += part.failures;
      }
    }
  rep.holds = rep.failures == 0;
  return rep;
}

BatteryReport battery_tail(long long specs, long long samples, std::uint64_t seed, int threads) {
  BatteryReport rep;
  for (long long i = 0; i < specs; ++i) {
    Rng rng(seed, 0x7461696cull * 1024 + static_cast<std::uint64_t>(i));
    MdsSpec m;
    m.B = 0.5 + 1.5 * rng.next_unit();
    m.norm.kind = rng.next_below(4) == 0 ? NormSpec::Kind::lq : NormSpec::Kind::l2;
    if (m.norm.kind == NormSpec::Kind::lq) m.norm.q = 2.5 + rng.next_unit();
    int T, k;
    if (rng.next_below(2) == 0) {
      // Dense tree, small depth.
      m.tree.T = T = 1 + static_cast<int>(rng.next_below(5));
      m.tree.k = k = 1 + static_cast<int>(rng.next_below(3));
      m.tree.nodes.resize((1u << T) - 1);
    } else {
      // Procedural palette, deep.
      m.T = T = 50 + static_cast<int>(rng.next_below(151));
      m.k = k = 1 + static_cast<int>(rng.next_below(4));
      m.palette.resize(1 + rng.next_below(6));
      m.palette_seed = rng.next_u64();
    }
    auto fill = [&](Vec& v) {
      v.resize(k);
      for (auto& c : v) c = 2.0 * rng.next_unit() - 1.0;
      const double n = norm_of(m.norm, v);
      if (n > m.B)
        for (auto& c : v) c *= m.B / n * (0.2 + 0.8 * rng.next_unit());
    };
    for (auto& v : m.tree.nodes) fill(v);
    for (auto& v : m.palette) fill(v);
    Vec thresholds;
    for (double c : {1.0, 2.0, 3.0}) thresholds.push_back(c * m.B * std::sqrt(double(T)));
    const TailReport tr = mc_tail_report(m, thresholds, samples, seed ^ (0xabcdull + i), threads);
    double margin = -1e18;
    for (const auto& row : tr.rows)
      if (row.valid) margin = std::max(margin, row.empirical - row.bound - 3.0 * row.se);
    track(rep, tr.holds, margin, "mds spec " + std::to_string(i) + " (T " + std::to_string(T) + ")");
  }
  rep.holds = rep.failures == 0;
  return rep;
}

BatteryReport battery_concavity(long long trials, std::uint64_t seed) {
  BatteryReport rep;
  bool first = true;
  for (auto kind : {NormSpec::Kind::l1, NormSpec::Kind::l2, NormSpec::Kind::linf})
    for (int k : {2, 3, 5}) {
      NormSpec norm;
      norm.kind = kind;
      const ConcavityReport cr = concavity_check(norm, k, trials, seed);
      ++rep.count;
      if (!cr.holds) ++rep.failures;
      if (first || cr.min_slack < rep.worst) {
        rep.worst = cr.min_slack;
        rep.worst_what = norm.name() + " k " + std::to_string(k);
        first = false;
      }
    }
  rep.holds = rep.failures == 0;
  return rep;
}

BatteryReport battery_adaptive_encoding() {
  BatteryReport rep;
  const std::vector<std::string> F = {"a", "b"}, X = {"u", "v"};
  const std::vector<std::vector<int>> maps = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  std::vector<std::vector<std::vector<int>>> psis;
  for (std::size_t a = 0; a < maps.size(); ++a) {
    psis.push_back({maps[a]});
    for (std::size_t b = a + 1; b < maps.size(); ++b) psis.push_back({maps[a], maps[b]});
  }
  const double levels[3] = {0.0, 0.5, 1.0};
  for (int mask = 0; mask < 81; ++mask) {
    std::vector<std::vector<double>> loss(2, std::vector<double>(2));
    int m = mask;
    for (int f = 0; f < 2; ++f)
      for (int x = 0; x < 2; ++x) {
        loss[f][x] = levels[m % 3];
        m /= 3;
      }
    for (const auto& psi : psis)
      for (int T = 1; T <= 3; ++T) {
        const GameSpec g = make_adaptive_game(F, X, loss, psi, T);
        for (long long h = 0; h < (1LL << (2 * T)); ++h) {
          History hist;
          for (int t = 0; t < T; ++t)
            hist.push_back({static_cast<int>((h >> (2 * t)) & 1),
                            static_cast<int>((h >> (2 * t + 1)) & 1)});
          const double enc = regret_of_history(g, hist);
          const double dir = adaptive_regret(loss, hist, psi);
          const double diff = std::abs(enc - dir);
          track(rep, diff <= 1e-12, diff,
                "loss mask " + std::to_string(mask) + " |Psi| " + std::to_string(psi.size()) +
                    " T " + std::to_string(T) + " history " + std::to_string(h));
        }
      }
  }
  rep.holds = rep.failures == 0;
  return rep;
}

}  // namespace olab
