#include "core/dims.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "core/bounds.hpp"

namespace olab {

std::string DimResult::text() const {
  return at_cap ? ">=" + std::to_string(dim) : std::to_string(dim);
}

namespace {

constexpr int kMaxTransforms = 20;  // subset memoisation key budget

// vals[phi][f][x]: scalar payoff of transform phi at (f,x), read from the
// base step (round 0) of each sequence.
std::vector<std::vector<Vec>> base_values(const GameSpec& g, const char* what) {
  if (g.payoff.k != 1)
    fail_invalid(std::string(what) + " requires scalar payoffs (k = 1); got k = " +
                 std::to_string(g.payoff.k));
  if (g.phi.seqs.empty()) fail_invalid(std::string(what) + " requires a nonempty transform set");
  if (static_cast<int>(g.phi.seqs.size()) > kMaxTransforms)
    fail_budget(std::string(what) + " supports at most " + std::to_string(kMaxTransforms) +
                " transforms (subset memoisation); got " + std::to_string(g.phi.seqs.size()));
  std::vector<std::vector<Vec>> vals(g.phi.seqs.size());
  for (std::size_t p = 0; p < g.phi.seqs.size(); ++p) {
    vals[p].assign(g.nf(), Vec(g.nx()));
    for (int f = 0; f < g.nf(); ++f)
      for (int x = 0; x < g.nx(); ++x) vals[p][f][x] = g.phi_loss(g.phi.seqs[p], 0, f, x)[0];
  }
  return vals;
}

// Shattering feasibility at depth d over the transform subset `mask`: pick a
// node label (f,x) and a witness s so that the transforms above s + alpha/2
// shatter one child and those below s - alpha/2 shatter the other.
struct ShatterSearch {
  const std::vector<std::vector<Vec>>& vals;
  int nf, nx;
  double alpha;
  const Vec& grid;
  std::unordered_map<std::uint64_t, bool> memo;

  bool feasible(int d, std::uint64_t mask) {
    if (mask == 0) return false;
    if (d == 0) return true;
    std::uint64_t key = (static_cast<std::uint64_t>(d) << kMaxTransforms) | mask;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = false;
    for (int f = 0; f < nf && !ok; ++f)
      for (int x = 0; x < nx && !ok; ++x)
        for (double s : grid) {
          std::uint64_t up = 0, down = 0;
          for (std::size_t p = 0; p < vals.size(); ++p) {
            if (!((mask >> p) & 1)) continue;
            double v = vals[p][f][x];
            if (v >= s + alpha / 2 - 1e-12) up |= std::uint64_t{1} << p;
            if (v <= s - alpha / 2 + 1e-12) down |= std::uint64_t{1} << p;
          }
          if (up && down && feasible(d - 1, up) && feasible(d - 1, down)) {
            ok = true;
            break;
          }
        }
    memo[key] = ok;
    return ok;
  }
};

DimResult capped_search(ShatterSearch& s, std::uint64_t full, int cap) {
  if (cap < 0) fail_invalid("dimension cap must be >= 0; got " + std::to_string(cap));
  DimResult out;
  while (out.dim < cap && s.feasible(out.dim + 1, full)) ++out.dim;
  // Reaching the cap without a refutation only certifies dimension >= cap.
  out.at_cap = out.dim == cap;
  return out;
}

}  // namespace

DimResult sdim(const GameSpec& g, int cap) {
  auto vals = base_values(g, "sdim");
  if (!g.phi.time_invariant) fail_invalid("sdim requires a time-invariant transform set");
  for (const auto& per_f : vals)
    for (const auto& row : per_f)
      for (double v : row)
        if (v != 1.0 && v != -1.0)
          fail_invalid("sdim requires payoff values in {-1,+1}; got " + fmt12(v));
  Vec grid{0.0};
  ShatterSearch s{vals, g.nf(), g.nx(), 2.0, grid, {}};
  return capped_search(s, (std::uint64_t{1} << vals.size()) - 1, cap);
}

DimResult fat_dim(const GameSpec& g, double alpha, const Vec& witness_grid, int cap) {
  auto vals = base_values(g, "fat_dim");
  if (!g.phi.time_invariant) fail_invalid("fat_dim requires a time-invariant transform set");
  if (!(alpha > 0)) fail_invalid("fat_dim requires alpha > 0; got " + fmt12(alpha));
  if (witness_grid.empty()) fail_invalid("fat_dim requires a nonempty witness grid");
  ShatterSearch s{vals, g.nf(), g.nx(), alpha, witness_grid, {}};
  return capped_search(s, (std::uint64_t{1} << vals.size()) - 1, cap);
}

Vec midpoint_witness_grid(const GameSpec& g) {
  auto vals = base_values(g, "midpoint_witness_grid");
  Vec all;
  for (const auto& per_f : vals)
    for (const auto& row : per_f) all.insert(all.end(), row.begin(), row.end());
  std::sort(all.begin(), all.end());
  Vec distinct;
  for (double v : all)
    if (distinct.empty() || v > distinct.back() + 1e-12) distinct.push_back(v);
  if (distinct.size() == 1) return distinct;  // degenerate: single achievable value
  Vec grid;
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
    grid.push_back((distinct[i] + distinct[i + 1]) / 2);
  return grid;
}

namespace {

// Group transform indices in `mask` by their (near-exact) value at (f,x).
std::vector<std::uint64_t> value_groups(const std::vector<std::vector<Vec>>& vals,
                                        std::uint64_t mask, int f, int x) {
  std::vector<std::pair<double, int>> items;
  for (std::size_t p = 0; p < vals.size(); ++p)
    if ((mask >> p) & 1) items.emplace_back(vals[p][f][x], static_cast<int>(p));
  std::sort(items.begin(), items.end());
  std::vector<std::uint64_t> groups;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i == 0 || items[i].first > items[i - 1].first + 1e-12) groups.push_back(0);
    groups.back() |= std::uint64_t{1} << items[i].second;
  }
  return groups;
}

// Exact zero-cover on a fixed tree: trees sharing a root value serve exactly
// the transforms matching that value, and their two subtrees cover those
// transforms independently, so the optimum is the sum over value groups of
// the larger child demand.
struct ZeroCover {
  const GameSpec& g;
  const LabeledTree& tree;
  std::unordered_map<std::uint64_t, long long> memo;
  int nphi;

  double val_at(int phi, std::size_t node, int t) const {
    auto [f, x] = tree.nodes[node];
    return g.phi_loss(g.phi.seqs[phi], t, f, x)[0];
  }

  long long solve(std::size_t node, int t, std::uint64_t mask) {
    if (mask == 0) return 0;
    if (t == tree.T) return 1;
    std::uint64_t key = (static_cast<std::uint64_t>(node) << nphi) | mask;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<std::pair<double, int>> items;
    for (int p = 0; p < nphi; ++p)
      if ((mask >> p) & 1) items.emplace_back(val_at(p, node, t), p);
    std::sort(items.begin(), items.end());
    long long total = 0;
    std::size_t i = 0;
    while (i < items.size()) {
      std::uint64_t group = 0;
      std::size_t j = i;
      while (j < items.size() && items[j].first <= items[i].first + 1e-12)
        group |= std::uint64_t{1} << items[j++].second;
      total += std::max(solve(2 * node + 1, t + 1, group), solve(2 * node + 2, t + 1, group));
      i = j;
    }
    memo[key] = total;
    return total;
  }
};

double path_norm(CoverP p, const Vec& diffs) {
  double out = 0;
  switch (p) {
    case CoverP::one:
      for (double d : diffs) out += d;
      return out / diffs.size();
    case CoverP::two:
      for (double d : diffs) out += d * d;
      return std::sqrt(out / diffs.size());
    case CoverP::inf:
      for (double d : diffs) out = std::max(out, d);
      return out;
    case CoverP::zero:
      for (double d : diffs) out = std::max(out, d);
      return out;  // compared against 0
  }
  fail_internal("unhandled cover norm");
}

struct BitsetRows {
  int words;
  std::vector<std::uint64_t> bits;  // row-major
  std::uint64_t* row(std::size_t i) { return bits.data() + i * words; }
  const std::uint64_t* row(std::size_t i) const { return bits.data() + i * words; }
};

int popcount_row(const std::uint64_t* r, int words) {
  int c = 0;
  for (int w = 0; w < words; ++w) c += __builtin_popcountll(r[w]);
  return c;
}

long long greedy_cover(int universe, const BitsetRows& rows, std::size_t nsets) {
  int words = rows.words;
  std::vector<std::uint64_t> full(words, 0);
  for (int e = 0; e < universe; ++e) full[e / 64] |= std::uint64_t{1} << (e % 64);
  std::vector<std::uint64_t> cov(words, 0);
  long long used = 0;
  while (true) {
    bool done = true;
    for (int w = 0; w < words; ++w)
      if ((cov[w] & full[w]) != full[w]) done = false;
    if (done) break;
    std::size_t pick = nsets;
    int gain = 0;
    for (std::size_t s = 0; s < nsets; ++s) {
      int gn = 0;
      for (int w = 0; w < words; ++w)
        gn += __builtin_popcountll(rows.row(s)[w] & full[w] & ~cov[w]);
      if (gn > gain) {
        gain = gn;
        pick = s;
      }
    }
    if (pick == nsets)
      fail_check("set cover infeasible: some (transform, path) pair is covered by no candidate tree");
    for (int w = 0; w < words; ++w) cov[w] |= rows.row(pick)[w];
    ++used;
  }
  return used;
}

// Exact minimum set cover by branch and bound around a greedy incumbent.
struct SetCover {
  int universe, words;
  const BitsetRows& rows;
  std::size_t nsets;
  long long best;
  std::vector<std::uint64_t> covered;
  int max_set_size;

  SetCover(int u, const BitsetRows& r, std::size_t n)
      : universe(u), words(r.words), rows(r), nsets(n) {
    max_set_size = 1;
    for (std::size_t s = 0; s < nsets; ++s)
      max_set_size = std::max(max_set_size, popcount_row(rows.row(s), words));
    best = greedy_cover(universe, rows, nsets);
    covered.assign(words, 0);
    branch(0);
  }

  void branch(long long used) {
    int remaining = 0;
    for (int e = 0; e < universe; ++e)
      if (!((covered[e / 64] >> (e % 64)) & 1)) ++remaining;
    if (remaining == 0) {
      best = std::min(best, used);
      return;
    }
    if (used + (remaining + max_set_size - 1) / max_set_size >= best) return;
    // Branch on the uncovered element with the fewest covering candidates.
    int pick_e = -1, pick_n = static_cast<int>(nsets) + 1;
    for (int e = 0; e < universe; ++e) {
      if ((covered[e / 64] >> (e % 64)) & 1) continue;
      int n = 0;
      for (std::size_t s = 0; s < nsets; ++s)
        if ((rows.row(s)[e / 64] >> (e % 64)) & 1) ++n;
      if (n < pick_n) {
        pick_n = n;
        pick_e = e;
      }
    }
    if (pick_n == 0)
      fail_check("set cover infeasible: some (transform, path) pair is covered by no candidate tree");
    for (std::size_t s = 0; s < nsets; ++s) {
      if (!((rows.row(s)[pick_e / 64] >> (pick_e % 64)) & 1)) continue;
      std::vector<std::uint64_t> save = covered;
      for (int w = 0; w < words; ++w) covered[w] |= rows.row(s)[w];
      branch(used + 1);
      covered = save;
    }
  }
};

}  // namespace

CoverResult cover_number(CoverP p, double alpha, const GameSpec& g, const LabeledTree& tree,
                         bool allow_greedy, long long candidate_budget) {
  tree.validate(g);
  if (g.payoff.k != 1)
    fail_invalid("cover_number requires scalar payoffs (k = 1); got k = " +
                 std::to_string(g.payoff.k));
  if (g.phi.seqs.empty()) fail_invalid("cover_number requires a nonempty transform set");
  int nphi = static_cast<int>(g.phi.seqs.size());
  if (nphi > kMaxTransforms)
    fail_budget("cover_number supports at most " + std::to_string(kMaxTransforms) +
                " transforms; got " + std::to_string(nphi));
  if (p != CoverP::zero && !(alpha >= 0))
    fail_invalid("cover_number requires alpha >= 0; got " + fmt12(alpha));

  if (p == CoverP::zero) {
    ZeroCover zc{g, tree, {}, nphi};
    return {zc.solve(0, 0, (std::uint64_t{1} << nphi) - 1), true, 1.0};
  }

  int T = tree.T;
  std::size_t nnodes = tree.nodes.size();
  // Candidate values per node: achievable transform values plus midpoints of
  // consecutive distinct values (the continuous optimum can sit between).
  std::vector<Vec> node_vals(nnodes);
  int depth_of = 0;
  for (std::size_t i = 0; i < nnodes; ++i) {
    if (i == (std::size_t{1} << (depth_of + 1)) - 1) ++depth_of;
    Vec vs;
    for (int ph = 0; ph < nphi; ++ph)
      vs.push_back(g.phi_loss(g.phi.seqs[ph], depth_of, tree.nodes[i].first, tree.nodes[i].second)[0]);
    std::sort(vs.begin(), vs.end());
    Vec distinct;
    for (double v : vs)
      if (distinct.empty() || v > distinct.back() + 1e-12) distinct.push_back(v);
    Vec cands = distinct;
    for (std::size_t j = 0; j + 1 < distinct.size(); ++j)
      cands.push_back((distinct[j] + distinct[j + 1]) / 2);
    std::sort(cands.begin(), cands.end());
    node_vals[i] = cands;
  }
  double n_cand = 1;
  for (const Vec& vs : node_vals) n_cand *= static_cast<double>(vs.size());
  bool greedy_only = n_cand > static_cast<double>(candidate_budget);
  if (greedy_only && !allow_greedy)
    fail_budget("cover_number: " + fmt12(n_cand) +
                " candidate trees exceed the exact budget " + std::to_string(candidate_budget) +
                " and greedy is disabled");

  // Universe: (transform, path) pairs.
  int npaths = 1 << T;
  int universe = nphi * npaths;
  int words = (universe + 63) / 64;

  // Per (transform, path): the payoff profile along the path.
  std::vector<std::vector<Vec>> profiles(nphi, std::vector<Vec>(npaths, Vec(T)));
  std::vector<std::vector<std::size_t>> path_nodes(npaths, std::vector<std::size_t>(T));
  for (int pa = 0; pa < npaths; ++pa) {
    std::size_t node = 0;
    for (int t = 0; t < T; ++t) {
      path_nodes[pa][t] = node;
      node = (pa >> t) & 1 ? 2 * node + 2 : 2 * node + 1;
    }
  }
  for (int ph = 0; ph < nphi; ++ph)
    for (int pa = 0; pa < npaths; ++pa)
      for (int t = 0; t < T; ++t) {
        auto [f, x] = tree.nodes[path_nodes[pa][t]];
        profiles[ph][pa][t] = g.phi_loss(g.phi.seqs[ph], t, f, x)[0];
      }

  Vec diffs(T);
  auto coverage_of = [&](const Vec& assign) {
    std::vector<std::uint64_t> cover(words, 0);
    for (int ph = 0; ph < nphi; ++ph)
      for (int pa = 0; pa < npaths; ++pa) {
        for (int t = 0; t < T; ++t)
          diffs[t] = std::abs(assign[path_nodes[pa][t]] - profiles[ph][pa][t]);
        if (path_norm(p, diffs) <= alpha + 1e-12) {
          int e = ph * npaths + pa;
          cover[e / 64] |= std::uint64_t{1} << (e % 64);
        }
      }
    return cover;
  };

  std::vector<std::vector<std::uint64_t>> seen;
  Vec assign(nnodes);
  if (greedy_only) {
    // Seed the truncated pool with each transform's own trace tree so the
    // greedy cover is always feasible.
    for (int ph = 0; ph < nphi; ++ph) {
      int depth = 0;
      for (std::size_t i = 0; i < nnodes; ++i) {
        if (i == (std::size_t{1} << (depth + 1)) - 1) ++depth;
        auto [f, x] = tree.nodes[i];
        assign[i] = g.phi_loss(g.phi.seqs[ph], depth, f, x)[0];
      }
      seen.push_back(coverage_of(assign));
    }
  }
  // Mixed-radix enumeration over per-node value choices.
  std::vector<std::size_t> counter(nnodes, 0);
  long long enumerated = 0;
  long long enum_cap = greedy_only ? candidate_budget : static_cast<long long>(n_cand);
  bool more = true;
  while (more && enumerated < enum_cap) {
    for (std::size_t i = 0; i < nnodes; ++i) assign[i] = node_vals[i][counter[i]];
    seen.push_back(coverage_of(assign));
    ++enumerated;
    more = false;
    for (std::size_t i = 0; i < nnodes; ++i) {
      if (++counter[i] < node_vals[i].size()) {
        more = true;
        break;
      }
      counter[i] = 0;
    }
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  BitsetRows rows;
  rows.words = words;
  rows.bits.reserve(seen.size() * words);
  for (const auto& r : seen) rows.bits.insert(rows.bits.end(), r.begin(), r.end());

  if (greedy_only) {
    int max_set = 1;
    for (std::size_t s = 0; s < seen.size(); ++s)
      max_set = std::max(max_set, popcount_row(rows.row(s), words));
    long long g_count = greedy_cover(universe, rows, seen.size());
    return {g_count, false, std::log(static_cast<double>(max_set)) + 1.0};
  }
  SetCover sc(universe, rows, seen.size());
  return {sc.best, true, 1.0};
}

long long max_zero_cover(const GameSpec& g, int T) {
  auto vals = base_values(g, "max_zero_cover");
  if (!g.phi.time_invariant) fail_invalid("max_zero_cover requires a time-invariant transform set");
  if (T < 1) fail_invalid("max_zero_cover requires T >= 1; got " + std::to_string(T));
  int nphi = static_cast<int>(vals.size());
  std::unordered_map<std::uint64_t, long long> memo;
  // Worst tree: each child subtree is maximised independently, so the demand
  // of a value group is a single recursive call.
  auto rec = [&](auto&& self, int t, std::uint64_t mask) -> long long {
    if (mask == 0) return 0;
    if (t == T) return 1;
    std::uint64_t key = (static_cast<std::uint64_t>(t) << nphi) | mask;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long best = 0;
    for (int f = 0; f < g.nf(); ++f)
      for (int x = 0; x < g.nx(); ++x) {
        long long total = 0;
        for (std::uint64_t grp : value_groups(vals, mask, f, x)) total += self(self, t + 1, grp);
        best = std::max(best, total);
      }
    memo[key] = best;
    return best;
  };
  return rec(rec, 0, (std::uint64_t{1} << nphi) - 1);
}

SauerReport verify_sauer(const GameSpec& g, int T) {
  auto vals = base_values(g, "verify_sauer");
  if (!g.phi.time_invariant) fail_invalid("verify_sauer requires a time-invariant transform set");
  if (T < 1) fail_invalid("verify_sauer requires T >= 1; got " + std::to_string(T));
  int kmax = 0;
  for (const auto& per_f : vals)
    for (const auto& row : per_f)
      for (double v : row) {
        double r = std::round(v);
        if (std::abs(v - r) > 1e-9 || r < 0)
          fail_invalid("verify_sauer requires integer payoff values in {0..k}; got " + fmt12(v));
        kmax = std::max(kmax, static_cast<int>(r));
      }
  SauerReport rep;
  rep.k = kmax;
  DimResult d = fat_dim(g, 1.0, midpoint_witness_grid(g), T);
  rep.d = d.dim;
  rep.zero_cover = max_zero_cover(g, T);
  CombParams cp;
  cp.T = T;
  cp.d = rep.d;
  cp.k = std::max(rep.k, 0);
  CombResult b = combinatorial_bound("sauer", cp);
  rep.bound_text = b.text;
  rep.bound_approx = b.approx;
  rep.holds = boost::multiprecision::cpp_int(rep.zero_cover) <= b.integer;
  return rep;
}

}  // namespace olab
