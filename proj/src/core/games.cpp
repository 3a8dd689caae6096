#include "core/games.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core/common.hpp"
#include "core/lp.hpp"
#include "core/rng.hpp"

namespace olab {

namespace {

void check_label_loss(const std::vector<std::string>& F, const std::vector<std::string>& X,
                      const std::vector<std::vector<double>>& loss, const char* what) {
  if (F.empty() || X.empty()) fail_invalid(std::string(what) + " needs nonempty action sets");
  if (loss.size() != F.size())
    fail_invalid(std::string(what) + " loss table needs one row per player action");
  for (const auto& row : loss)
    if (row.size() != X.size())
      fail_invalid(std::string(what) + " loss table needs one column per adversary action");
}

GameSpec scalar_loss_game(const std::vector<std::string>& F, const std::vector<std::string>& X,
                          const std::vector<std::vector<double>>& loss, int T) {
  GameSpec g;
  g.F = F;
  g.X = X;
  g.T = T;
  g.payoff.k = 1;
  g.payoff.values.resize(F.size());
  for (std::size_t f = 0; f < F.size(); ++f) {
    g.payoff.values[f].resize(X.size());
    for (std::size_t x = 0; x < X.size(); ++x) g.payoff.values[f][x] = Vec{loss[f][x]};
  }
  g.agg.kind = Aggregator::Kind::average;
  return g;
}

TransformSeq departure_seq(std::string name, std::vector<int> map) {
  TransformSeq seq;
  seq.name = std::move(name);
  TransformStep step;
  step.kind = TransformStep::Kind::departure;
  step.map = std::move(map);
  seq.steps.push_back(std::move(step));
  return seq;
}

// All ways to split `total` into `parts` nonnegative integers, first part
// descending: a fixed deterministic order.
template <class Fn>
void for_each_composition(int total, int parts, std::vector<int>& cur, Fn&& fn) {
  if (parts == 1) {
    cur.push_back(total);
    fn(cur);
    cur.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur.push_back(v);
    for_each_composition(total - v, parts - 1, cur, fn);
    cur.pop_back();
  }
}

// Geometrically spaced checkpoint rounds in [1, T]; n <= 0 means none.
std::vector<long long> trace_checkpoints(long long T, int n) {
  std::vector<long long> out;
  if (n <= 0) return out;
  if (n == 1 || T == 1) {
    out.push_back(T);
    return out;
  }
  const double lt = std::log(static_cast<double>(T));
  for (int i = 0; i < n; ++i) {
    double f = lt * i / (n - 1);
    long long t = std::llround(std::exp(f));
    t = std::max<long long>(1, std::min(T, t));
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  if (out.back() != T) out.push_back(T);
  return out;
}

double l2_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Calibration transcripts

void CalibrationTranscript::validate() const {
  if (k < 1) fail_invalid("transcript needs k >= 1");
  if (forecasts.size() != outcomes.size())
    fail_invalid("transcript needs one outcome per forecast");
  for (std::size_t t = 0; t < forecasts.size(); ++t) {
    const Vec& f = forecasts[t];
    if (static_cast<int>(f.size()) != k)
      fail_invalid("transcript forecast " + std::to_string(t) + " is not a " + std::to_string(k) +
                   "-vector");
    double sum = 0;
    for (double v : f) {
      if (v < -1e-12)
        fail_invalid("transcript forecast " + std::to_string(t) + " has a negative coordinate");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      fail_invalid("transcript forecast " + std::to_string(t) + " does not sum to 1 within 1e-12");
    if (outcomes[t] < 0 || outcomes[t] >= k)
      fail_invalid("transcript outcome " + std::to_string(t) + " is out of range");
  }
}

std::string CalibrationTranscript::to_csv() const {
  validate();
  std::string out;
  char buf[64];
  for (std::size_t t = 0; t < forecasts.size(); ++t) {
    for (int j = 0; j < k; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,", forecasts[t][j]);
      out += buf;
    }
    out += std::to_string(outcomes[t]);
    out += '\n';
  }
  return out;
}

CalibrationTranscript CalibrationTranscript::from_csv(const std::string& text) {
  CalibrationTranscript tr;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2)
      fail_parse("transcript CSV line " + std::to_string(lineno) +
                 ": need forecast coordinates then an outcome index");
    // A header row (non-numeric first cell) may precede the data.
    {
      char* end = nullptr;
      std::strtod(cells[0].c_str(), &end);
      bool numeric = end != cells[0].c_str();
      if (!numeric) {
        if (tr.k == 0 && tr.forecasts.empty()) continue;
        fail_parse("transcript CSV line " + std::to_string(lineno) + ": unexpected non-numeric row");
      }
    }
    const int kk = static_cast<int>(cells.size()) - 1;
    if (tr.k == 0)
      tr.k = kk;
    else if (kk != tr.k)
      fail_parse("transcript CSV line " + std::to_string(lineno) + ": expected " +
                 std::to_string(tr.k + 1) + " columns, got " + std::to_string(cells.size()));
    Vec f(kk);
    for (int j = 0; j < kk; ++j) {
      try {
        std::size_t used = 0;
        f[j] = std::stod(cells[j], &used);
        while (used < cells[j].size() && std::isspace(static_cast<unsigned char>(cells[j][used])))
          ++used;
        if (used != cells[j].size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        fail_parse("transcript CSV line " + std::to_string(lineno) + ": bad forecast coordinate '" +
                   cells[j] + "'");
      }
    }
    int x = 0;
    try {
      std::size_t used = 0;
      x = std::stoi(cells[kk], &used);
      while (used < cells[kk].size() && std::isspace(static_cast<unsigned char>(cells[kk][used])))
        ++used;
      if (used != cells[kk].size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      fail_parse("transcript CSV line " + std::to_string(lineno) + ": bad outcome index '" +
                 cells[kk] + "'");
    }
    tr.forecasts.push_back(std::move(f));
    tr.outcomes.push_back(x);
  }
  if (tr.forecasts.empty()) fail_parse("transcript CSV holds no data rows");
  tr.validate();
  return tr;
}

// ---------------------------------------------------------------------------
// Simplex grid

GridSimplex make_grid_simplex(int k, double delta, int lattice_res) {
  if (k < 1) fail_invalid("grid simplex needs k >= 1");
  if (!(delta > 0)) fail_invalid("grid simplex needs delta > 0");
  long long M = lattice_res;
  if (M <= 0) M = std::max<long long>(k, static_cast<long long>(std::ceil(2.0 * k / delta)));

  double approx_count = 1;  // C(M + k - 1, k - 1)
  for (int i = 1; i < k; ++i) approx_count *= static_cast<double>(M + i) / i;
  if (approx_count > 2e6)
    fail_budget("grid simplex lattice would hold about " + fmt12(approx_count) +
                " points; the budget is 2000000 (coarsen delta or pass a smaller lattice_res)");

  std::vector<std::vector<int>> selected;
  const double gap = 2.0 * delta * static_cast<double>(M);  // integer-L1 packing threshold
  std::vector<int> cur;
  for_each_composition(static_cast<int>(M), k, cur, [&](const std::vector<int>& pt) {
    for (const auto& s : selected) {
      long long d = 0;
      for (int j = 0; j < k; ++j) d += std::abs(pt[j] - s[j]);
      if (!(static_cast<double>(d) > gap)) return;  // within 2*delta of a member
    }
    selected.push_back(pt);
  });

  GridSimplex g;
  g.k = k;
  g.delta = delta;
  g.points.reserve(selected.size());
  for (const auto& s : selected) {
    Vec p(k);
    for (int j = 0; j < k; ++j) p[j] = static_cast<double>(s[j]) / static_cast<double>(M);
    g.points.push_back(std::move(p));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Regret-game constructors

GameSpec make_external(const std::vector<std::string>& F, const std::vector<std::string>& X,
                       const std::vector<std::vector<double>>& loss, int T) {
  check_label_loss(F, X, loss, "make_external");
  GameSpec g = scalar_loss_game(F, X, loss, T);
  const int nf = static_cast<int>(F.size());
  for (int f = 0; f < nf; ++f)
    g.phi.seqs.push_back(departure_seq("to:" + F[f], std::vector<int>(nf, f)));
  g.validate();
  return g;
}

GameSpec make_phi_regret(const std::vector<std::string>& F, const std::vector<std::string>& X,
                         const std::vector<std::vector<double>>& loss, PhiFamily family,
                         const std::vector<std::vector<int>>& explicit_maps, int T,
                         long long budget) {
  check_label_loss(F, X, loss, "make_phi_regret");
  GameSpec g = scalar_loss_game(F, X, loss, T);
  const int nf = static_cast<int>(F.size());

  auto add_map = [&](std::string name, std::vector<int> map) {
    g.phi.seqs.push_back(departure_seq(std::move(name), std::move(map)));
  };

  switch (family) {
    case PhiFamily::explicit_list: {
      if (explicit_maps.empty()) fail_invalid("explicit transform family needs at least one map");
      if (static_cast<long long>(explicit_maps.size()) > budget)
        fail_budget("explicit transform family holds " + std::to_string(explicit_maps.size()) +
                    " maps; the budget is " + std::to_string(budget));
      for (std::size_t i = 0; i < explicit_maps.size(); ++i) {
        const auto& m = explicit_maps[i];
        if (static_cast<int>(m.size()) != nf)
          fail_invalid("explicit map " + std::to_string(i) + " needs one entry per player action");
        for (int v : m)
          if (v < 0 || v >= nf)
            fail_invalid("explicit map " + std::to_string(i) + " has an out-of-range entry");
        add_map("phi" + std::to_string(i), m);
      }
      break;
    }
    case PhiFamily::internal: {
      std::vector<int> id(nf);
      std::iota(id.begin(), id.end(), 0);
      add_map("id", id);
      for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b) {
          if (a == b) continue;
          std::vector<int> m = id;
          m[a] = b;
          add_map(F[a] + "->" + F[b], std::move(m));
        }
      break;
    }
    case PhiFamily::swap_all: {
      std::string count;
      if (pow_budget_exceeded(nf, nf, budget, count))
        fail_budget("swap transform family needs |F|^|F| = " + count + " maps; the budget is " +
                    std::to_string(budget));
      const long long total = std::stoll(count);
      for (long long m = 0; m < total; ++m) {
        std::vector<int> map(nf);
        long long rem = m;
        std::string name = "map:";
        for (int f = 0; f < nf; ++f) {
          map[f] = static_cast<int>(rem % nf);
          rem /= nf;
          if (f) name += ',';
          name += std::to_string(map[f]);
        }
        add_map(std::move(name), std::move(map));
      }
      break;
    }
  }
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// One-shot approachability certificate

OneShotReport one_shot_check(const PayoffTable& tab, const TargetSet& S, const NormSpec& norm,
                             int p_grid_res) {
  norm.validate();
  if (p_grid_res < 1) fail_invalid("one_shot_check needs p_grid_res >= 1");
  if (tab.k < 1) fail_invalid("one_shot_check needs k >= 1");
  if (tab.values.empty() || tab.values[0].empty())
    fail_invalid("one_shot_check needs a nonempty payoff table");
  const int nf = static_cast<int>(tab.values.size());
  const int nx = static_cast<int>(tab.values[0].size());
  for (const auto& row : tab.values) {
    if (static_cast<int>(row.size()) != nx)
      fail_invalid("one_shot_check payoff rows must share one width");
    for (const auto& v : row)
      if (static_cast<int>(v.size()) != tab.k)
        fail_invalid("one_shot_check payoff entries must be k-vectors");
  }
  if (S.vertices.empty()) fail_invalid("one_shot_check needs a nonempty target set");
  for (const auto& v : S.vertices)
    if (static_cast<int>(v.size()) != tab.k)
      fail_invalid("one_shot_check target vertices must be k-vectors");

  const Vec zero(tab.k, 0.0);
  OneShotReport rep;
  rep.margin = -1;
  std::vector<int> cur;
  // min over q of dist(E loss, S) equals the distance from the origin to the
  // hull of the pairwise differences {E_x~p loss(f, x) - s_j}.
  for_each_composition(p_grid_res, nx, cur, [&](const std::vector<int>& comp) {
    std::vector<Vec> diffs;
    diffs.reserve(static_cast<std::size_t>(nf) * S.vertices.size());
    for (int f = 0; f < nf; ++f) {
      Vec cf(tab.k, 0.0);
      for (int x = 0; x < nx; ++x) {
        const double px = static_cast<double>(comp[x]) / p_grid_res;
        if (px == 0) continue;
        for (int j = 0; j < tab.k; ++j) cf[j] += px * tab.values[f][x][j];
      }
      for (const auto& s : S.vertices) {
        Vec d(tab.k);
        for (int j = 0; j < tab.k; ++j) d[j] = cf[j] - s[j];
        diffs.push_back(std::move(d));
      }
    }
    const double d = distance_to_hull(zero, diffs, norm).dist;
    if (d > rep.margin) {
      rep.margin = d;
      rep.worst_p.assign(nx, 0.0);
      for (int x = 0; x < nx; ++x)
        rep.worst_p[x] = static_cast<double>(comp[x]) / p_grid_res;
    }
  });
  rep.certified_on_grid = rep.margin <= 1e-9;
  rep.caveat = "minimum checked at adversary mixtures on a resolution-" + std::to_string(p_grid_res) +
               " grid; off-grid mixtures are unchecked";
  return rep;
}

// ---------------------------------------------------------------------------
// Approachability player

BlackwellPlayer::BlackwellPlayer(PayoffTable table, TargetSet S, NormSpec norm)
    : tab_(std::move(table)), S_(std::move(S)), norm_(norm) {
  norm_.validate();
  if (tab_.k < 1) fail_invalid("blackwell player needs k >= 1");
  if (tab_.values.empty() || tab_.values[0].empty())
    fail_invalid("blackwell player needs a nonempty payoff table");
  const std::size_t nx = tab_.values[0].size();
  for (const auto& row : tab_.values) {
    if (row.size() != nx) fail_invalid("blackwell player payoff rows must share one width");
    for (const auto& v : row)
      if (static_cast<int>(v.size()) != tab_.k)
        fail_invalid("blackwell player payoff entries must be k-vectors");
  }
  if (S_.vertices.empty()) fail_invalid("blackwell player needs a nonempty target set");
  for (const auto& v : S_.vertices)
    if (static_cast<int>(v.size()) != tab_.k)
      fail_invalid("blackwell player target vertices must be k-vectors");
  sum_.assign(tab_.k, 0.0);
}

Vec BlackwellPlayer::average() const {
  Vec avg(tab_.k, 0.0);
  if (t_ == 0) return avg;
  for (int j = 0; j < tab_.k; ++j) avg[j] = sum_[j] / static_cast<double>(t_);
  return avg;
}

double BlackwellPlayer::distance() const {
  return distance_to_hull(average(), S_.vertices, norm_).dist;
}

Vec BlackwellPlayer::next_mix() {
  const int nf = static_cast<int>(tab_.values.size());
  const int nx = static_cast<int>(tab_.values[0].size());
  Vec uniform(nf, 1.0 / nf);
  if (t_ == 0) return uniform;
  const Vec avg = average();
  const DistanceResult dr = distance_to_hull(avg, S_.vertices, norm_);
  if (dr.dist <= 1e-9) return uniform;  // inside the target: fixed default
  Vec u(tab_.k);
  for (int j = 0; j < tab_.k; ++j) u[j] = avg[j] - dr.witness[j];
  std::vector<std::vector<double>> M(nf, std::vector<double>(nx));
  for (int f = 0; f < nf; ++f)
    for (int x = 0; x < nx; ++x) {
      double s = 0;
      for (int j = 0; j < tab_.k; ++j) s += u[j] * (tab_.values[f][x][j] - dr.witness[j]);
      M[f][x] = s;
    }
  return solve_matrix_game_row_t(M, 1e-11, 1e-9).row_mix;
}

void BlackwellPlayer::observe(int f, int x) {
  if (f < 0 || f >= static_cast<int>(tab_.values.size()))
    fail_invalid("blackwell observe: player action out of range");
  if (x < 0 || x >= static_cast<int>(tab_.values[0].size()))
    fail_invalid("blackwell observe: adversary action out of range");
  for (int j = 0; j < tab_.k; ++j) sum_[j] += tab_.values[f][x][j];
  ++t_;
}

BlackwellRun run_blackwell(const PayoffTable& tab, const TargetSet& S, const NormSpec& norm,
                           long long T, BwOpponent opp, int constant_x, std::uint64_t seed,
                           int trace_points) {
  if (T < 1) fail_invalid("blackwell run needs T >= 1");
  BlackwellPlayer pl(tab, S, norm);
  const int nf = static_cast<int>(tab.values.size());
  const int nx = static_cast<int>(tab.values[0].size());
  if (opp == BwOpponent::constant && (constant_x < 0 || constant_x >= nx))
    fail_invalid("constant opponent outcome index out of range");
  Rng rng(seed, 0x626c61636bull);
  const std::vector<long long> cps = trace_checkpoints(T, trace_points);
  std::size_t cpi = 0;

  BlackwellRun out;
  for (long long t = 1; t <= T; ++t) {
    if (out.first_correction == 0 && pl.distance() > 1e-9) out.first_correction = t;
    const Vec q = pl.next_mix();
    int x = 0;
    switch (opp) {
      case BwOpponent::constant:
        x = constant_x;
        break;
      case BwOpponent::uniform:
        x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(nx)));
        break;
      case BwOpponent::best_response: {
        // One-step lookahead: the column that pushes the expected new average
        // farthest from the target.
        const Vec avg = pl.average();
        double best = -1;
        for (int cx = 0; cx < nx; ++cx) {
          Vec cand(tab.k, 0.0);
          for (int j = 0; j < tab.k; ++j) cand[j] = avg[j] * static_cast<double>(t - 1);
          for (int f = 0; f < nf; ++f)
            for (int j = 0; j < tab.k; ++j) cand[j] += q[f] * tab.values[f][cx][j];
          for (int j = 0; j < tab.k; ++j) cand[j] /= static_cast<double>(t);
          const double d = distance_to_hull(cand, S.vertices, norm).dist;
          if (d > best) {
            best = d;
            x = cx;
          }
        }
        break;
      }
    }
    const int f = rng.next_index(q);
    pl.observe(f, x);
    if (cpi < cps.size() && t == cps[cpi]) {
      out.trace.push_back({t, pl.distance()});
      ++cpi;
    }
  }
  out.final_distance = pl.distance();
  return out;
}

// ---------------------------------------------------------------------------
// Calibration scoring

namespace {

struct DistinctForecasts {
  std::vector<Vec> pts;      // one representative per distinct forecast value
  std::vector<Vec> errsum;   // summed forecast-minus-outcome error per group
};

DistinctForecasts collapse_rounds(const CalibrationTranscript& tr) {
  const std::size_t T = tr.forecasts.size();
  std::vector<std::size_t> order(T);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tr.forecasts[a] < tr.forecasts[b];
  });
  DistinctForecasts out;
  auto same = [&](const Vec& a, const Vec& b) {
    for (int j = 0; j < tr.k; ++j)
      if (std::abs(a[j] - b[j]) > 1e-12) return false;
    return true;
  };
  for (std::size_t idx : order) {
    const Vec& f = tr.forecasts[idx];
    if (out.pts.empty() || !same(out.pts.back(), f)) {
      out.pts.push_back(f);
      out.errsum.emplace_back(tr.k, 0.0);
    }
    Vec& e = out.errsum.back();
    for (int j = 0; j < tr.k; ++j) e[j] += f[j] - (j == tr.outcomes[idx] ? 1.0 : 0.0);
  }
  return out;
}

}  // namespace

double calibration_regret(const CalibrationTranscript& tr, const NormSpec& norm) {
  norm.validate();
  tr.validate();
  if (tr.forecasts.empty()) fail_invalid("calibration_regret requires a nonempty transcript");
  const double T = static_cast<double>(tr.forecasts.size());
  DistinctForecasts D = collapse_rounds(tr);
  const int n = static_cast<int>(D.pts.size());
  double best = 0;  // the empty pattern

  if (tr.k == 2) {
    // Forecasts live on a segment, and an L1 ball meets it in an interval, so
    // the achievable patterns are exactly the contiguous runs in sorted order
    // of the first coordinate (collapse_rounds already sorted them).
    std::vector<Vec> pre(n + 1, Vec(2, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j) pre[i + 1][j] = pre[i][j] + D.errsum[i][j];
    Vec acc(2);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        acc[0] = pre[j + 1][0] - pre[i][0];
        acc[1] = pre[j + 1][1] - pre[i][1];
        best = std::max(best, norm_of(norm, acc) / T);
      }
    return best;
  }

  // General dimension: candidate centers at the distinct forecasts and their
  // pairwise midpoints, candidate radii at every realised center-to-forecast
  // distance (closed balls sweep all threshold patterns).
  std::vector<Vec> centers = D.pts;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec m(tr.k);
      for (int c = 0; c < tr.k; ++c) m[c] = 0.5 * (D.pts[i][c] + D.pts[j][c]);
      centers.push_back(std::move(m));
    }
  std::vector<std::pair<double, int>> by_dist(n);
  Vec acc(tr.k);
  for (const Vec& p : centers) {
    for (int i = 0; i < n; ++i) {
      double d = 0;
      for (int c = 0; c < tr.k; ++c) d += std::abs(D.pts[i][c] - p[c]);
      by_dist[i] = {d, i};
    }
    std::sort(by_dist.begin(), by_dist.end());
    std::fill(acc.begin(), acc.end(), 0.0);
    int i = 0;
    while (i < n) {
      int j = i;
      while (j < n && by_dist[j].first <= by_dist[i].first + 1e-12) {
        const Vec& e = D.errsum[by_dist[j].second];
        for (int c = 0; c < tr.k; ++c) acc[c] += e[c];
        ++j;
      }
      best = std::max(best, norm_of(norm, acc) / T);
      i = j;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Calibrated forecaster (approachability over grid cells)

namespace {

// Blackwell state on the per-cell error vector: coordinate block c holds the
// summed error 1{forecast = c}(point(c) - e_x). Target {0}, L2 geometry, so
// the projection is the origin and the separating direction is the average
// itself; the payoff structure is block-sparse which keeps each round O(|C|k).
struct CellForecaster {
  const GridSimplex& grid;
  std::vector<double> asum;
  long long t = 0;
  std::vector<std::vector<double>> M;  // M[c][x] = <avg_c, point(c) - e_x>
  Vec q;
  bool corrected = false;  // whether M/q came from the correction branch

  explicit CellForecaster(const GridSimplex& g)
      : grid(g),
        asum(g.points.size() * static_cast<std::size_t>(g.k), 0.0),
        M(g.points.size(), std::vector<double>(g.k, 0.0)),
        q(g.points.size(), 0.0) {}

  void compute_mix() {
    const std::size_t C = grid.points.size();
    const int k = grid.k;
    corrected = false;
    if (t > 0 && l2_of(asum) / static_cast<double>(t) > 1e-12) {
      corrected = true;
      const double inv = 1.0 / static_cast<double>(t);
      for (std::size_t c = 0; c < C; ++c) {
        const double* u = asum.data() + c * k;
        double b = 0;
        for (int j = 0; j < k; ++j) b += u[j] * inv * grid.points[c][j];
        for (int x = 0; x < k; ++x) M[c][x] = b - u[x] * inv;
      }
      q = solve_matrix_game_row_t(M, 1e-11, 1e-9).row_mix;
    } else {
      std::fill(q.begin(), q.end(), 1.0 / static_cast<double>(C));
    }
  }

  // The adversary's side of the round's projected zero-sum game: the maximin
  // mixture over outcomes, max_p min_c sum_x p_x M[c][x]. Playing it cancels
  // the forecaster's inward drift, which is what makes this opponent the hard
  // one; a deterministic greedy response is exploited at a 1/T rate instead.
  Vec adversary_mix() const {
    const int k = grid.k;
    Vec p(k, 1.0 / k);
    if (!corrected) return p;  // zero matrix: every mixture is maximin
    if (k == 2) {
      // max over p in [0,1] of min_c (p M[c][0] + (1-p) M[c][1]): concave and
      // piecewise linear, so a ternary search converges geometrically.
      auto floor_at = [&](double pp) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < M.size(); ++c)
          m = std::min(m, pp * M[c][0] + (1.0 - pp) * M[c][1]);
        return m;
      };
      double lo = 0, hi = 1;
      for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (floor_at(m1) < floor_at(m2))
          lo = m1;
        else
          hi = m2;
      }
      p[0] = 0.5 * (lo + hi);
      p[1] = 1.0 - p[0];
      return p;
    }
    // General k: the column player of M is the row player of -M^T.
    std::vector<std::vector<double>> A(k, std::vector<double>(M.size()));
    for (int x = 0; x < k; ++x)
      for (std::size_t c = 0; c < M.size(); ++c) A[x][c] = -M[c][x];
    return solve_matrix_game_row_t(A, 1e-11, 1e-9).row_mix;
  }

  void advance(int c, int x) {
    const int k = grid.k;
    double* blk = asum.data() + static_cast<std::size_t>(c) * k;
    for (int j = 0; j < k; ++j) blk[j] += grid.points[c][j] - (j == x ? 1.0 : 0.0);
    ++t;
  }
};

int pick_outcome(CellForecaster& fc, CalibOpponent opp, int constant_outcome, Rng& rng, int k) {
  switch (opp) {
    case CalibOpponent::constant:
      return constant_outcome;
    case CalibOpponent::random_bits:
      return static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
    case CalibOpponent::adaptive:
      return rng.next_index(fc.adversary_mix());
  }
  fail_internal("unknown calibration opponent");
}

}  // namespace

CalibRun run_calibrated(int k, double delta, long long T, CalibOpponent opp, int constant_outcome,
                        std::uint64_t seed, int trace_points, long long budget) {
  if (k < 1) fail_invalid("calibrated forecaster needs k >= 1");
  if (!(delta > 0)) fail_invalid("calibrated forecaster needs delta > 0");
  if (T < 1) fail_invalid("calibrated forecaster needs T >= 1");
  if (opp == CalibOpponent::constant && (constant_outcome < 0 || constant_outcome >= k))
    fail_invalid("constant outcome index out of range");
  const GridSimplex grid = make_grid_simplex(k, delta);
  const long long state = static_cast<long long>(grid.points.size()) * k;
  if (state > budget)
    fail_budget("calibrated forecaster state dimension |C_delta|*k = " + std::to_string(state) +
                " exceeds the budget " + std::to_string(budget));

  Rng rng(seed, 0x63616c6962ull);
  CellForecaster fc(grid);
  const NormSpec l1{NormSpec::Kind::l1, 2.0};
  const std::vector<long long> cps = trace_checkpoints(T, trace_points);
  std::size_t cpi = 0;

  CalibRun out;
  out.transcript.k = k;
  out.transcript.forecasts.reserve(static_cast<std::size_t>(T));
  out.transcript.outcomes.reserve(static_cast<std::size_t>(T));
  for (long long t = 1; t <= T; ++t) {
    fc.compute_mix();
    const int x = pick_outcome(fc, opp, constant_outcome, rng, k);
    const int c = rng.next_index(fc.q);
    out.transcript.forecasts.push_back(grid.points[c]);
    out.transcript.outcomes.push_back(x);
    fc.advance(c, x);
    if (cpi < cps.size() && t == cps[cpi]) {
      out.trace.push_back({t, calibration_regret(out.transcript, l1)});
      ++cpi;
    }
  }
  out.regret = out.trace.empty() || out.trace.back().t != T
                   ? calibration_regret(out.transcript, l1)
                   : out.trace.back().value;
  return out;
}

DoublingRun run_doubling(int k, long long T, CalibOpponent opp, int constant_outcome,
                         std::uint64_t seed, int trace_points) {
  if (k < 1) fail_invalid("doubling forecaster needs k >= 1");
  if (T < 1) fail_invalid("doubling forecaster needs T >= 1");
  if (opp == CalibOpponent::constant && (constant_outcome < 0 || constant_outcome >= k))
    fail_invalid("constant outcome index out of range");

  const NormSpec l1{NormSpec::Kind::l1, 2.0};
  const std::vector<long long> cps = trace_checkpoints(T, trace_points);
  std::size_t cpi = 0;

  DoublingRun out;
  out.transcript.k = k;
  long long t = 1;
  for (int r = 1; t <= T; ++r) {
    const long long start = (1LL << r) - 1;
    const long long horizon = 1LL << r;
    out.boundaries.push_back(start);
    const double delta_r = std::pow(2.0, -0.5 * r);
    const GridSimplex grid = make_grid_simplex(k, delta_r);
    CellForecaster fc(grid);
    Rng rng(seed, 0x64626c0000ull + static_cast<std::uint64_t>(r));
    for (long long e = 0; e < horizon && t <= T; ++e, ++t) {
      fc.compute_mix();
      const int x = pick_outcome(fc, opp, constant_outcome, rng, k);
      const int c = rng.next_index(fc.q);
      out.transcript.forecasts.push_back(grid.points[c]);
      out.transcript.outcomes.push_back(x);
      fc.advance(c, x);
      if (cpi < cps.size() && t == cps[cpi]) {
        out.trace.push_back({t, calibration_regret(out.transcript, l1)});
        ++cpi;
      }
    }
  }
  out.regret = out.trace.empty() || out.trace.back().t != T
                   ? calibration_regret(out.transcript, l1)
                   : out.trace.back().value;
  return out;
}

// ---------------------------------------------------------------------------
// Global-cost game and the simplex-weighted norm infimum

GameSpec make_global_cost(int k, const NormSpec& norm, int T, const std::vector<Vec>& f_grid,
                          const std::vector<Vec>& x_grid) {
  norm.validate();
  if (k < 1) fail_invalid("global cost game needs k >= 1");
  if (f_grid.empty() || x_grid.empty()) fail_invalid("global cost game needs nonempty grids");
  for (std::size_t i = 0; i < f_grid.size(); ++i) {
    const Vec& f = f_grid[i];
    if (static_cast<int>(f.size()) != k)
      fail_invalid("global cost player grid point " + std::to_string(i) + " is not a k-vector");
    double sum = 0;
    for (double v : f) {
      if (v < -1e-9)
        fail_invalid("global cost player grid point " + std::to_string(i) +
                     " has a negative coordinate");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      fail_invalid("global cost player grid point " + std::to_string(i) + " does not sum to 1");
  }
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const Vec& x = x_grid[i];
    if (static_cast<int>(x.size()) != k)
      fail_invalid("global cost adversary grid point " + std::to_string(i) + " is not a k-vector");
    for (double v : x)
      if (v < -1e-9 || v > 1 + 1e-9)
        fail_invalid("global cost adversary grid point " + std::to_string(i) +
                     " leaves the unit cube");
  }

  GameSpec g;
  g.T = T;
  g.payoff.k = k;
  g.payoff.values.resize(f_grid.size());
  for (std::size_t f = 0; f < f_grid.size(); ++f) {
    g.F.push_back("f" + std::to_string(f));
    g.payoff.values[f].resize(x_grid.size());
    for (std::size_t x = 0; x < x_grid.size(); ++x) {
      Vec prod(k);
      for (int j = 0; j < k; ++j) prod[j] = f_grid[f][j] * x_grid[x][j];
      g.payoff.values[f][x] = std::move(prod);
    }
  }
  for (std::size_t x = 0; x < x_grid.size(); ++x) g.X.push_back("x" + std::to_string(x));
  g.agg.kind = Aggregator::Kind::norm_of_average;
  g.agg.norm = norm;
  const int nf = static_cast<int>(f_grid.size());
  for (int f = 0; f < nf; ++f)
    g.phi.seqs.push_back(departure_seq("to:f" + std::to_string(f), std::vector<int>(nf, f)));
  g.validate();
  return g;
}

double simplex_weighted_norm_inf(const Vec& x, const NormSpec& norm) {
  norm.validate();
  if (x.empty()) fail_invalid("simplex_weighted_norm_inf needs a nonempty vector");
  for (double v : x)
    if (v < 0) fail_invalid("simplex_weighted_norm_inf requires nonnegative coordinates");
  for (double v : x)
    if (v == 0) return 0.0;  // put all forecast mass on the free coordinate

  switch (norm.kind) {
    case NormSpec::Kind::l1: {
      double m = x[0];
      for (double v : x) m = std::min(m, v);
      return m;
    }
    case NormSpec::Kind::linf: {
      double s = 0;
      for (double v : x) s += 1.0 / v;
      return 1.0 / s;
    }
    case NormSpec::Kind::l2:
    case NormSpec::Kind::lq: {
      const double qq = norm.kind == NormSpec::Kind::l2 ? 2.0 : norm.q;
      if (qq <= 1.0 + 1e-12) {  // the L1 limit
        double m = x[0];
        for (double v : x) m = std::min(m, v);
        return m;
      }
      // Stationarity on the simplex puts f_i proportional to x_i^{-q'} with
      // q' the conjugate exponent, collapsing the infimum to a closed form.
      const double qc = qq / (qq - 1.0);
      double s = 0;
      for (double v : x) s += std::pow(v, -qc);
      return std::pow(s, -1.0 / qc);
    }
  }
  fail_internal("unknown norm kind");
}

ConcavityReport concavity_check(const NormSpec& norm, int k, long long trials, std::uint64_t seed) {
  norm.validate();
  if (k < 1) fail_invalid("concavity check needs k >= 1");
  if (trials < 1) fail_invalid("concavity check needs trials >= 1");
  Rng rng(seed, 0x636f6e63ull);
  ConcavityReport rep;
  rep.trials = trials;
  rep.min_slack = std::numeric_limits<double>::infinity();
  Vec x(k), y(k), mid(k);
  for (long long i = 0; i < trials; ++i) {
    for (int j = 0; j < k; ++j) x[j] = 2.0 * rng.next_unit();
    for (int j = 0; j < k; ++j) y[j] = 2.0 * rng.next_unit();
    for (int j = 0; j < k; ++j) mid[j] = 0.5 * (x[j] + y[j]);
    const double slack = simplex_weighted_norm_inf(mid, norm) -
                         0.5 * (simplex_weighted_norm_inf(x, norm) +
                                simplex_weighted_norm_inf(y, norm));
    rep.min_slack = std::min(rep.min_slack, slack);
  }
  rep.holds = rep.min_slack >= -1e-7;
  return rep;
}

// ---------------------------------------------------------------------------
// Adaptive (interval) regret

double adaptive_regret(const std::vector<std::vector<double>>& loss, const History& h,
                       const std::vector<std::vector<int>>& psi) {
  if (loss.empty() || loss[0].empty()) fail_invalid("adaptive_regret needs a nonempty loss table");
  const int nf = static_cast<int>(loss.size());
  const int nx = static_cast<int>(loss[0].size());
  for (const auto& row : loss) {
    if (static_cast<int>(row.size()) != nx)
      fail_invalid("adaptive_regret loss rows must share one width");
    for (double v : row)
      if (v < 0 || v > 1) fail_invalid("adaptive_regret requires loss values in [0,1]");
  }
  if (psi.empty()) fail_invalid("adaptive_regret needs at least one departure map");
  for (std::size_t m = 0; m < psi.size(); ++m) {
    if (static_cast<int>(psi[m].size()) != nf)
      fail_invalid("departure map " + std::to_string(m) + " needs one entry per player action");
    for (int v : psi[m])
      if (v < 0 || v >= nf)
        fail_invalid("departure map " + std::to_string(m) + " has an out-of-range entry");
  }
  const int T = static_cast<int>(h.size());
  if (T < 1) fail_invalid("adaptive_regret needs a nonempty history");
  for (const auto& [f, x] : h)
    if (f < 0 || f >= nf || x < 0 || x >= nx)
      fail_invalid("adaptive_regret history action out of range");

  std::vector<double> played(T + 1, 0.0);
  std::vector<std::vector<double>> dep(psi.size(), std::vector<double>(T + 1, 0.0));
  for (int t = 0; t < T; ++t) {
    played[t + 1] = played[t] + loss[h[t].first][h[t].second];
    for (std::size_t m = 0; m < psi.size(); ++m)
      dep[m][t + 1] = dep[m][t] + loss[psi[m][h[t].first]][h[t].second];
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < T; ++r)
    for (int s = r; s < T; ++s) {
      double alt = std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < psi.size(); ++m)
        alt = std::min(alt, dep[m][s + 1] - dep[m][r]);
      best = std::max(best, played[s + 1] - played[r] - alt);
    }
  return best / T;
}

GameSpec make_adaptive_game(const std::vector<std::string>& F, const std::vector<std::string>& X,
                            const std::vector<std::vector<double>>& loss,
                            const std::vector<std::vector<int>>& psi, int T, long long budget) {
  check_label_loss(F, X, loss, "make_adaptive_game");
  const int nf = static_cast<int>(F.size());
  const int nx = static_cast<int>(X.size());
  if (psi.empty()) fail_invalid("make_adaptive_game needs at least one departure map");
  for (std::size_t m = 0; m < psi.size(); ++m) {
    if (static_cast<int>(psi[m].size()) != nf)
      fail_invalid("departure map " + std::to_string(m) + " needs one entry per player action");
    for (int v : psi[m])
      if (v < 0 || v >= nf)
        fail_invalid("departure map " + std::to_string(m) + " has an out-of-range entry");
  }
  if (T < 1) fail_invalid("make_adaptive_game needs T >= 1");
  const long long count =
      static_cast<long long>(T) * (T + 1) / 2 * static_cast<long long>(psi.size());
  if (count > budget)
    fail_budget("adaptive game needs " + std::to_string(count) +
                " transform sequences; the budget is " + std::to_string(budget));

  GameSpec g;
  g.F = F;
  g.X = X;
  g.T = T;
  g.payoff.k = 1;
  g.payoff.values.assign(nf, std::vector<Vec>(nx, Vec{0.0}));
  g.agg.kind = Aggregator::Kind::average;

  TransformStep zero_step;
  zero_step.kind = TransformStep::Kind::payoff_override;
  zero_step.table.assign(nf, std::vector<Vec>(nx, Vec{0.0}));

  for (std::size_t m = 0; m < psi.size(); ++m) {
    // Inside the interval the transformed payoff is the departure's gain
    // loss(psi(f), x) - loss(f, x); outside it is zero.
    TransformStep gain;
    gain.kind = TransformStep::Kind::payoff_override;
    gain.table.assign(nf, std::vector<Vec>(nx, Vec{0.0}));
    for (int f = 0; f < nf; ++f)
      for (int x = 0; x < nx; ++x) gain.table[f][x][0] = loss[psi[m][f]][x] - loss[f][x];
    for (int r = 0; r < T; ++r)
      for (int s = r; s < T; ++s) {
        TransformSeq seq;
        seq.name = "psi" + std::to_string(m) + ":[" + std::to_string(r + 1) + "," +
                   std::to_string(s + 1) + "]";
        seq.steps.assign(static_cast<std::size_t>(T), zero_step);
        for (int t = r; t <= s; ++t) seq.steps[static_cast<std::size_t>(t)] = gain;
        g.phi.seqs.push_back(std::move(seq));
      }
  }
  g.validate();
  return g;
}

}  // namespace olab
