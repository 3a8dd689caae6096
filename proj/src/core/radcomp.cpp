#include "core/radcomp.hpp"

#include <cmath>
#include <functional>
#include <unordered_map>

#include "core/rng.hpp"

namespace olab {

void LabeledTree::validate(const GameSpec& g) const {
  if (T != g.T)
    fail_invalid("tree depth " + std::to_string(T) + " does not match horizon T=" +
                 std::to_string(g.T));
  if (T < 1 || T > 30) fail_invalid("tree depth must lie in [1, 30]");
  const std::size_t want = (std::size_t{1} << T) - 1;
  if (nodes.size() != want)
    fail_invalid("tree has " + std::to_string(nodes.size()) + " nodes; depth " +
                 std::to_string(T) + " requires " + std::to_string(want));
  for (const auto& [f, x] : nodes)
    if (f < 0 || f >= g.nf() || x < 0 || x >= g.nx())
      fail_invalid("tree node label outside F x X");
}

namespace {

int check_sign(int sign) {
  if (sign != 1 && sign != -1) fail_invalid("sign must be +1 (B) or -1 (-B)");
  return sign;
}

struct IntVecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.size();
    for (int x : v) h = mix64(h ^ (static_cast<std::uint64_t>(x) + 0x100000001b3ull));
    return static_cast<std::size_t>(h);
  }
};

// Shared leaf: max over transforms of sign * B(signed-sum / T).
double rad_leaf(const GameSpec& g, int sign, const std::vector<Vec>& comp) {
  const std::size_t k = static_cast<std::size_t>(g.payoff.k);
  Vec avg(k);
  double best = 0;
  bool first = true;
  for (const auto& sums : comp) {
    for (std::size_t j = 0; j < k; ++j) avg[j] = sums[j] / g.T;
    const double b = sign * aggregate_avg(g.agg, avg);
    if (first || b > best) { best = b; first = false; }
  }
  return best;
}

class RadBackward {
 public:
  RadBackward(const GameSpec& g, int sign, const RadOptions& opt)
      : g_(g),
        sign_(check_sign(sign)),
        k_(static_cast<std::size_t>(g.payoff.k)),
        collapse_(opt.collapse && g.phi.time_invariant),
        comp_(g.phi.seqs.size(), Vec(k_, 0.0)),
        counts_(static_cast<std::size_t>(g.nf()) * g.nx() * 2, 0) {
    std::string count;
    if (pow_budget_exceeded(2LL * g.nf() * g.nx(), g.T, opt.budget, count))
      fail_budget("sequential-complexity recursion needs (2|F||X|)^T = " + count +
                  " leaf paths; budget is " + std::to_string(opt.budget) +
                  " (raise it explicitly to proceed)");
  }

  double run() { return node(0); }

 private:
  double node(int t) {
    if (t == g_.T) return rad_leaf(g_, sign_, comp_);
    if (collapse_) {
      auto it = memo_.find(counts_);
      if (it != memo_.end()) return it->second;
    }
    double best = 0;
    bool first = true;
    for (int f = 0; f < g_.nf(); ++f)
      for (int x = 0; x < g_.nx(); ++x) {
        double mean = 0;
        for (int e = 0; e < 2; ++e) {
          const int eps = e == 0 ? -1 : +1;
          push(t, f, x, eps, e);
          mean += 0.5 * node(t + 1);
          pop(t, f, x, eps, e);
        }
        if (first || mean > best) { best = mean; first = false; }
      }
    if (collapse_) memo_.emplace(counts_, best);
    return best;
  }

  void push(int t, int f, int x, int eps, int e) {
    for (std::size_t s = 0; s < comp_.size(); ++s) {
      const Vec& w = g_.phi_loss(g_.phi.seqs[s], t, f, x);
      for (std::size_t j = 0; j < k_; ++j) comp_[s][j] += eps * w[j];
    }
    ++counts_[(static_cast<std::size_t>(f) * g_.nx() + x) * 2 + e];
  }

  void pop(int t, int f, int x, int eps, int e) {
    for (std::size_t s = 0; s < comp_.size(); ++s) {
      const Vec& w = g_.phi_loss(g_.phi.seqs[s], t, f, x);
      for (std::size_t j = 0; j < k_; ++j) comp_[s][j] -= eps * w[j];
    }
    --counts_[(static_cast<std::size_t>(f) * g_.nx() + x) * 2 + e];
  }

  const GameSpec& g_;
  int sign_;
  std::size_t k_;
  bool collapse_;
  std::vector<Vec> comp_;
  std::vector<int> counts_;
  std::unordered_map<std::vector<int>, double, IntVecHash> memo_;
};

}  // namespace

double rad_exact(const GameSpec& g, int sign, const RadOptions& opt) {
  return RadBackward(g, sign, opt).run();
}

double rad_on_tree_exact(const GameSpec& g, const LabeledTree& tree, int sign) {
  check_sign(sign);
  tree.validate(g);
  const std::size_t k = static_cast<std::size_t>(g.payoff.k);
  std::vector<Vec> comp(g.phi.seqs.size(), Vec(k, 0.0));
  const std::function<double(int, std::size_t)> walk = [&](int t, std::size_t idx) -> double {
    if (t == g.T) return rad_leaf(g, sign, comp);
    const auto [f, x] = tree.nodes[idx];
    double mean = 0;
    for (int e = 0; e < 2; ++e) {
      const int eps = e == 0 ? -1 : +1;
      for (std::size_t s = 0; s < comp.size(); ++s) {
        const Vec& w = g.phi_loss(g.phi.seqs[s], t, f, x);
        for (std::size_t j = 0; j < k; ++j) comp[s][j] += eps * w[j];
      }
      mean += 0.5 * walk(t + 1, 2 * idx + 1 + static_cast<std::size_t>(e));
      for (std::size_t s = 0; s < comp.size(); ++s) {
        const Vec& w = g.phi_loss(g.phi.seqs[s], t, f, x);
        for (std::size_t j = 0; j < k; ++j) comp[s][j] -= eps * w[j];
      }
    }
    return mean;
  };
  return walk(0, 0);
}

McEstimate rad_on_tree_mc(const GameSpec& g, const LabeledTree& tree, int sign,
                          long long samples, std::uint64_t seed, int threads) {
  check_sign(sign);
  tree.validate(g);
  if (samples < 1) fail_invalid("rad_on_tree_mc needs samples >= 1");
  const std::size_t k = static_cast<std::size_t>(g.payoff.k);

  constexpr std::int64_t kChunk = 8192;
  const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sums(static_cast<std::size_t>(n_chunks), 0.0);
  std::vector<double> sumsqs(static_cast<std::size_t>(n_chunks), 0.0);

  parallel_chunks(samples, kChunk, threads, [&](std::int64_t c, std::int64_t lo, std::int64_t hi) {
    Rng rng(seed, static_cast<std::uint64_t>(c));
    std::vector<Vec> comp(g.phi.seqs.size(), Vec(k));
    double s = 0, s2 = 0;
    for (std::int64_t i = lo; i < hi; ++i) {
      for (auto& v : comp) std::fill(v.begin(), v.end(), 0.0);
      std::size_t idx = 0;
      for (int t = 0; t < g.T; ++t) {
        const int eps = rng.next_sign();
        const auto [f, x] = tree.nodes[idx];
        for (std::size_t sq = 0; sq < comp.size(); ++sq) {
          const Vec& w = g.phi_loss(g.phi.seqs[sq], t, f, x);
          for (std::size_t j = 0; j < k; ++j) comp[sq][j] += eps * w[j];
        }
        idx = 2 * idx + 1 + static_cast<std::size_t>(eps > 0 ? 1 : 0);
      }
      const double v = rad_leaf(g, sign, comp);
      s += v;
      s2 += v * v;
    }
    sums[static_cast<std::size_t>(c)] = s;
    sumsqs[static_cast<std::size_t>(c)] = s2;
  });

  double sum = 0, sumsq = 0;
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    sum += sums[static_cast<std::size_t>(c)];
    sumsq += sumsqs[static_cast<std::size_t>(c)];
  }
  McEstimate out;
  out.estimate = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (sumsq - sum * sum / static_cast<double>(samples)) /
                          static_cast<double>(samples - 1));
    out.se = std::sqrt(var / static_cast<double>(samples));
  }
  return out;
}

TreeSearchResult rad_tree_search(const GameSpec& g, int sign, int restarts, std::uint64_t seed,
                                 bool exhaustive, const RadOptions& opt) {
  check_sign(sign);
  if (g.T > 30) fail_invalid("tree search supports T <= 30");
  const std::size_t n_nodes = (std::size_t{1} << g.T) - 1;
  const int n_labels = g.nf() * g.nx();
  TreeSearchResult best;
  best.tree.T = g.T;
  best.tree.nodes.assign(n_nodes, {0, 0});
  best.exhaustive = exhaustive;

  const auto label_of = [&](int l) {
    return std::pair<int, int>{l / g.nx(), l % g.nx()};
  };

  if (exhaustive) {
    std::string count;
    if (pow_budget_exceeded(n_labels, static_cast<int>(n_nodes), opt.budget, count))
      fail_budget("exhaustive tree search needs (|F||X|)^(2^T-1) = " + count +
                  " candidate trees; budget is " + std::to_string(opt.budget));
    LabeledTree cur;
    cur.T = g.T;
    cur.nodes.assign(n_nodes, label_of(0));
    std::vector<int> digits(n_nodes, 0);
    bool first = true;
    for (;;) {
      const double v = rad_on_tree_exact(g, cur, sign);
      if (first || v > best.value) {
        best.value = v;
        best.tree = cur;
        first = false;
      }
      // increment the mixed-radix counter
      std::size_t pos = 0;
      while (pos < n_nodes) {
        if (++digits[pos] < n_labels) {
          cur.nodes[pos] = label_of(digits[pos]);
          break;
        }
        digits[pos] = 0;
        cur.nodes[pos] = label_of(0);
        ++pos;
      }
      if (pos == n_nodes) break;
    }
    return best;
  }

  if (restarts < 1) fail_invalid("tree search needs restarts >= 1");
  bool first = true;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed, static_cast<std::uint64_t>(r));
    LabeledTree cur;
    cur.T = g.T;
    cur.nodes.resize(n_nodes);
    for (auto& nd : cur.nodes)
      nd = label_of(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_labels))));
    double cur_v = rad_on_tree_exact(g, cur, sign);
    for (int sweep = 0; sweep < 100; ++sweep) {
      bool improved = false;
      for (std::size_t i = 0; i < n_nodes; ++i) {
        const auto keep = cur.nodes[i];
        auto best_l = keep;
        double best_v = cur_v;
        for (int l = 0; l < n_labels; ++l) {
          const auto cand = label_of(l);
          if (cand == keep) continue;
          cur.nodes[i] = cand;
          const double v = rad_on_tree_exact(g, cur, sign);
          if (v > best_v + 1e-15) {
            best_v = v;
            best_l = cand;
          }
        }
        cur.nodes[i] = best_l;
        if (best_v > cur_v + 1e-15) {
          cur_v = best_v;
          improved = true;
        }
      }
      if (!improved) break;
    }
    if (first || cur_v > best.value) {
      best.value = cur_v;
      best.tree = cur;
      first = false;
    }
  }
  return best;
}

TriplexReport triplex_certificate_linear(const GameSpec& g, const ValueOptions& opt) {
  if (g.agg.kind != Aggregator::Kind::average)
    fail_invalid("certificate requires the average aggregator; got \"" + g.agg.kind_name() +
                 "\"");
  if (!g.phi.all_departure)
    fail_invalid("certificate requires an all-departure transform set");
  TriplexReport rep;
  rep.val = exact_value(g, opt);
  RadOptions ro;
  ro.budget = opt.budget;
  ro.collapse = opt.collapse;
  rep.rad = rad_exact(g, +1, ro);
  rep.holds = rep.val <= 2.0 * rep.rad + 1e-9;
  return rep;
}

namespace {

// All distributions over d outcomes with denominator res.
std::vector<Vec> simplex_grid(int d, int res) {
  if (res < 1) fail_invalid("grid resolution must be >= 1");
  std::vector<Vec> out;
  Vec cur(static_cast<std::size_t>(d), 0.0);
  const std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d - 1) {
      cur[static_cast<std::size_t>(pos)] = static_cast<double>(left) / res;
      out.push_back(cur);
      return;
    }
    for (int take = 0; take <= left; ++take) {
      cur[static_cast<std::size_t>(pos)] = static_cast<double>(take) / res;
      rec(pos + 1, left - take);
    }
  };
  rec(0, res);
  return out;
}

}  // namespace

TriplexGrid triplex_grid_estimate(const GameSpec& g, int grid_res, const ValueOptions& opt) {
  TriplexGrid out;
  out.val = exact_value(g, opt);
  const std::size_t k = static_cast<std::size_t>(g.payoff.k);
  const std::size_t ns = g.phi.seqs.size();

  const auto px_grid = simplex_grid(g.nx(), grid_res);
  const auto qf_grid = simplex_grid(g.nf(), grid_res);

  double xpaths = std::pow(static_cast<double>(g.nx()), g.T);
  double fxpaths = std::pow(static_cast<double>(g.nf()) * g.nx(), g.T);
  double fseqs = std::pow(static_cast<double>(g.nf()), g.T);
  const double cost = static_cast<double>(px_grid.size()) * fseqs * xpaths +
                      static_cast<double>(px_grid.size()) * qf_grid.size() * 2.0 * fxpaths;
  if (cost * static_cast<double>(ns) > 2e8)
    fail_budget("grid estimate needs ~" + fmt12(cost * static_cast<double>(ns)) +
                " path evaluations; lower grid_res or T");

  // Term 1 vanishes identically under product-form strategies: the realised
  // average and an independent fresh copy share one distribution.
  out.t1 = 0.0;

  // Term 2: max over grid p of min over pure action sequences of
  // E'[B(realised)] - min_phi E'[B_phi], fresh draws x' ~ p each round.
  {
    bool first_p = true;
    for (const auto& p : px_grid) {
      std::vector<int> fseq(static_cast<std::size_t>(g.T), 0);
      double inner_best = 0;
      bool first_f = true;
      for (;;) {
        // enumerate x-paths with probabilities
        double eb = 0;
        std::vector<double> ebphi(ns, 0.0);
        Vec realised(k);
        std::vector<Vec> comp(ns, Vec(k));
        Vec avg(k);
        const std::function<void(int, double)> walk = [&](int t, double prob) {
          if (prob == 0.0) return;
          if (t == g.T) {
            for (std::size_t j = 0; j < k; ++j) avg[j] = realised[j] / g.T;
            eb += prob * aggregate_avg(g.agg, avg);
            for (std::size_t s = 0; s < ns; ++s) {
              for (std::size_t j = 0; j < k; ++j) avg[j] = comp[s][j] / g.T;
              ebphi[s] += prob * aggregate_avg(g.agg, avg);
            }
            return;
          }
          const int f = fseq[static_cast<std::size_t>(t)];
          for (int x = 0; x < g.nx(); ++x) {
            const Vec& z = g.loss(f, x);
            for (std::size_t j = 0; j < k; ++j) realised[j] += z[j];
            for (std::size_t s = 0; s < ns; ++s) {
              const Vec& w = g.phi_loss(g.phi.seqs[s], t, f, x);
              for (std::size_t j = 0; j < k; ++j) comp[s][j] += w[j];
            }
            walk(t + 1, prob * p[static_cast<std::size_t>(x)]);
            for (std::size_t j = 0; j < k; ++j) realised[j] -= z[j];
            for (std::size_t s = 0; s < ns; ++s) {
              const Vec& w = g.phi_loss(g.phi.seqs[s], t, f, x);
              for (std::size_t j = 0; j < k; ++j) comp[s][j] -= w[j];
            }
          }
        };
        walk(0, 1.0);
        const double score = eb - *std::min_element(ebphi.begin(), ebphi.end());
        if (first_f || score < inner_best) { inner_best = score; first_f = false; }
        // next pure action sequence
        std::size_t pos = 0;
        while (pos < fseq.size() && ++fseq[pos] == g.nf()) fseq[pos++] = 0;
        if (pos == fseq.size()) break;
      }
      if (first_p || inner_best > out.t2) { out.t2 = inner_best; first_p = false; }
    }
  }

  // Term 3: max over grid (q, p) of E[max_phi (E'[B_phi] - B_phi(realised))].
  {
    bool first_qp = true;
    Vec avg(k);
    for (const auto& q : qf_grid) {
      for (const auto& p : px_grid) {
        std::vector<Vec> comp(ns, Vec(k));
        std::vector<double> cphi(ns, 0.0);
        std::vector<double> bphi(ns, 0.0);
        double term = 0;
        // pass 0 accumulates E'[B_phi]; pass 1 accumulates the expected max.
        for (int pass = 0; pass < 2; ++pass) {
          const std::function<void(int, double)> walk = [&](int t, double prob) {
            if (prob == 0.0) return;
            if (t == g.T) {
              for (std::size_t s = 0; s < ns; ++s) {
                for (std::size_t j = 0; j < k; ++j) avg[j] = comp[s][j] / g.T;
                bphi[s] = aggregate_avg(g.agg, avg);
              }
              if (pass == 0) {
                for (std::size_t s = 0; s < ns; ++s) cphi[s] += prob * bphi[s];
              } else {
                double m = cphi[0] - bphi[0];
                for (std::size_t s = 1; s < ns; ++s) m = std::max(m, cphi[s] - bphi[s]);
                term += prob * m;
              }
              return;
            }
            for (int f = 0; f < g.nf(); ++f)
              for (int x = 0; x < g.nx(); ++x) {
                const double w = q[static_cast<std::size_t>(f)] * p[static_cast<std::size_t>(x)];
                if (w == 0.0) continue;
                for (std::size_t s = 0; s < ns; ++s) {
                  const Vec& z = g.phi_loss(g.phi.seqs[s], t, f, x);
                  for (std::size_t j = 0; j < k; ++j) comp[s][j] += z[j];
                }
                walk(t + 1, prob * w);
                for (std::size_t s = 0; s < ns; ++s) {
                  const Vec& z = g.phi_loss(g.phi.seqs[s], t, f, x);
                  for (std::size_t j = 0; j < k; ++j) comp[s][j] -= z[j];
                }
              }
          };
          walk(0, 1.0);
        }
        if (first_qp || term > out.t3) { out.t3 = term; first_qp = false; }
      }
    }
  }

  out.total = out.t1 + out.t2 + out.t3;
  out.caveats = {
      "product-form grid strategies make the martingale term vanish identically",
      "grid-restricted suprema understate the true outer suprema",
      "pure-response inner minima overstate the true infima",
      "t1+t2+t3 is a diagnostic decomposition, not a certified bound on the exact value",
  };
  return out;
}

}  // namespace olab
