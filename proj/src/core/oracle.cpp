#include "core/oracle.hpp"

#include <functional>

#include "core/lp.hpp"

namespace olab {

double rat_to_double(const Rat& r) { return static_cast<double>(r); }

namespace {

Rat rat_abs(const Rat& v) { return v < 0 ? Rat(-v) : v; }

bool rational_norm_ok(const NormSpec& ns) {
  return ns.kind == NormSpec::Kind::l1 || ns.kind == NormSpec::Kind::linf;
}

// Exact hull distance under l1/linf via the rational simplex.
Rat distance_rat(const std::vector<Rat>& y, const std::vector<std::vector<Rat>>& V, bool l1) {
  const std::size_t h = V.size(), k = y.size();
  if (h == 1) {
    Rat d = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const Rat a = rat_abs(y[j] - V[0][j]);
      if (l1)
        d += a;
      else if (a > d)
        d = a;
    }
    return d;
  }
  const std::size_t extra = l1 ? k : 1;
  LpProblem<Rat> p;
  p.n = static_cast<int>(h + extra);
  p.c.assign(h + extra, Rat(0));
  for (std::size_t e = 0; e < extra; ++e) p.c[h + e] = 1;
  p.a_eq.assign(1, std::vector<Rat>(h + extra, Rat(0)));
  for (std::size_t i = 0; i < h; ++i) p.a_eq[0][i] = 1;
  p.b_eq = {Rat(1)};
  p.a_le.assign(2 * k, std::vector<Rat>(h + extra, Rat(0)));
  p.b_le.assign(2 * k, Rat(0));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < h; ++i) {
      p.a_le[2 * j][i] = V[i][j];
      p.a_le[2 * j + 1][i] = -V[i][j];
    }
    const std::size_t dcol = l1 ? h + j : h;
    p.a_le[2 * j][dcol] = -1;
    p.a_le[2 * j + 1][dcol] = -1;
    p.b_le[2 * j] = y[j];
    p.b_le[2 * j + 1] = -y[j];
  }
  const auto r = lp_solve(p, Rat(0));
  if (r.status != lp_status::optimal) fail_internal("rational hull-distance LP not optimal");
  return r.objective;
}

struct RatAggregator {
  const Aggregator& agg;
  std::vector<std::vector<Rat>> target;

  explicit RatAggregator(const Aggregator& a) : agg(a) {
    switch (a.kind) {
      case Aggregator::Kind::average:
        break;
      case Aggregator::Kind::norm_of_average:
      case Aggregator::Kind::neg_norm_of_average:
        if (!rational_norm_ok(a.norm))
          fail_invalid("exact-rational mode requires an l1 or linf aggregator norm; got " +
                       a.norm.name());
        break;
      case Aggregator::Kind::distance_to_set:
        if (!rational_norm_ok(a.norm))
          fail_invalid("exact-rational mode requires an l1 or linf aggregator norm; got " +
                       a.norm.name());
        target.reserve(a.target.vertices.size());
        for (const auto& v : a.target.vertices) {
          std::vector<Rat> rv(v.size());
          for (std::size_t j = 0; j < v.size(); ++j) rv[j] = Rat(v[j]);
          target.push_back(std::move(rv));
        }
        break;
      case Aggregator::Kind::function_of_average:
        if (agg.fn.name == FnOfAverage::Name::max_coord) break;
        if (!rational_norm_ok(a.fn.norm))
          fail_invalid("exact-rational mode requires an l1 or linf aggregator norm; got " +
                       a.fn.norm.name());
        break;
    }
  }

  Rat norm_val(const NormSpec& ns, const std::vector<Rat>& v) const {
    Rat s = 0;
    if (ns.kind == NormSpec::Kind::l1) {
      for (const auto& x : v) s += rat_abs(x);
    } else {
      for (const auto& x : v) {
        const Rat a = rat_abs(x);
        if (a > s) s = a;
      }
    }
    return s;
  }

  Rat operator()(const std::vector<Rat>& avg) const {
    switch (agg.kind) {
      case Aggregator::Kind::average:
        return avg[0];
      case Aggregator::Kind::norm_of_average:
        return norm_val(agg.norm, avg);
      case Aggregator::Kind::neg_norm_of_average:
        return -norm_val(agg.norm, avg);
      case Aggregator::Kind::distance_to_set:
        return distance_rat(avg, target, agg.norm.kind == NormSpec::Kind::l1);
      case Aggregator::Kind::function_of_average:
        switch (agg.fn.name) {
          case FnOfAverage::Name::norm: return norm_val(agg.fn.norm, avg);
          case FnOfAverage::Name::neg_norm: return -norm_val(agg.fn.norm, avg);
          case FnOfAverage::Name::max_coord: {
            Rat best = avg[0];
            for (const auto& x : avg)
              if (x > best) best = x;
            return best;
          }
        }
    }
    fail_internal("unhandled aggregator kind in rational oracle");
  }
};

}  // namespace

Rat exact_value_rational(const GameSpec& g) {
  if (g.nf() > 4 || g.nx() > 4 || g.T > 3)
    fail_invalid("exact-rational mode supports |F|,|X| <= 4 and T <= 3; got |F|=" +
                 std::to_string(g.nf()) + " |X|=" + std::to_string(g.nx()) +
                 " T=" + std::to_string(g.T));
  const RatAggregator bfun(g.agg);
  const std::size_t k = static_cast<std::size_t>(g.payoff.k);
  const std::size_t ns = g.phi.seqs.size();

  std::vector<Rat> realised(k, Rat(0));
  std::vector<std::vector<Rat>> comp(ns, std::vector<Rat>(k, Rat(0)));

  const auto to_rat = [&](const Vec& v) {
    std::vector<Rat> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = Rat(v[j]);
    return out;
  };

  std::function<Rat(int)> node = [&](int t) -> Rat {
    if (t == g.T) {
      std::vector<Rat> avg(k);
      for (std::size_t j = 0; j < k; ++j) avg[j] = realised[j] / g.T;
      const Rat b_real = bfun(avg);
      Rat best = 0;
      bool first = true;
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t j = 0; j < k; ++j) avg[j] = comp[s][j] / g.T;
        const Rat b = bfun(avg);
        if (first || b < best) { best = b; first = false; }
      }
      return b_real - best;
    }
    std::vector<std::vector<Rat>> M(static_cast<std::size_t>(g.nf()),
                                    std::vector<Rat>(static_cast<std::size_t>(g.nx())));
    for (int f = 0; f < g.nf(); ++f)
      for (int x = 0; x < g.nx(); ++x) {
        const auto z = to_rat(g.loss(f, x));
        for (std::size_t j = 0; j < k; ++j) realised[j] += z[j];
        for (std::size_t s = 0; s < ns; ++s) {
          const auto w = to_rat(g.phi_loss(g.phi.seqs[s], t, f, x));
          for (std::size_t j = 0; j < k; ++j) comp[s][j] += w[j];
        }
        M[static_cast<std::size_t>(f)][static_cast<std::size_t>(x)] = node(t + 1);
        for (std::size_t j = 0; j < k; ++j) realised[j] -= z[j];
        for (std::size_t s = 0; s < ns; ++s) {
          const auto w = to_rat(g.phi_loss(g.phi.seqs[s], t, f, x));
          for (std::size_t j = 0; j < k; ++j) comp[s][j] -= w[j];
        }
      }
    return solve_matrix_game_t<Rat>(M, Rat(0), Rat(0)).value;
  };
  return node(0);
}

}  // namespace olab
