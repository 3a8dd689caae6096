#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace olab {

Aggregator::Subadd Aggregator::subadditivity() const {
  switch (kind) {
    case Kind::average: return Subadd::b;
    case Kind::norm_of_average: return Subadd::b;
    case Kind::neg_norm_of_average: return Subadd::neg_b;
    default: return Subadd::neither;
  }
}

std::string Aggregator::kind_name() const {
  switch (kind) {
    case Kind::average: return "average";
    case Kind::norm_of_average: return "norm-of-average";
    case Kind::neg_norm_of_average: return "neg-norm-of-average";
    case Kind::distance_to_set: return "distance-to-set";
    case Kind::function_of_average: return "function-of-average";
  }
  return "?";
}

NormSpec GameSpec::work_norm() const {
  switch (agg.kind) {
    case Aggregator::Kind::norm_of_average:
    case Aggregator::Kind::neg_norm_of_average:
    case Aggregator::Kind::distance_to_set:
      return agg.norm;
    case Aggregator::Kind::function_of_average:
      if (agg.fn.name != FnOfAverage::Name::max_coord) return agg.fn.norm;
      return NormSpec{NormSpec::Kind::l2, 2.0};
    default:
      return NormSpec{NormSpec::Kind::l2, 2.0};
  }
}

namespace {

void check_labels(const std::vector<std::string>& labels, const char* which) {
  if (labels.empty()) fail_invalid(std::string(which) + " must be nonempty");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) fail_invalid(std::string(which) + " contains an empty label");
    if (!seen.insert(l).second)
      fail_invalid(std::string(which) + " contains duplicate label \"" + l + "\"");
  }
}

void check_entry(const Vec& v, int k, const std::string& where) {
  if (static_cast<int>(v.size()) != k)
    fail_invalid(where + " has dimension " + std::to_string(v.size()) +
                 "; payoff dimension k=" + std::to_string(k));
  for (double x : v)
    if (!std::isfinite(x)) fail_invalid(where + " contains a non-finite value");
}

}  // namespace

void GameSpec::validate() {
  check_labels(F, "player action set F");
  check_labels(X, "adversary action set X");
  if (T < 1) fail_invalid("horizon T must be >= 1; got " + std::to_string(T));
  if (payoff.k < 1) fail_invalid("payoff dimension k must be >= 1");

  if (static_cast<int>(payoff.values.size()) != nf())
    fail_invalid("payoff table has " + std::to_string(payoff.values.size()) +
                 " rows; |F|=" + std::to_string(nf()));
  for (int f = 0; f < nf(); ++f) {
    if (static_cast<int>(payoff.values[f].size()) != nx())
      fail_invalid("payoff row " + std::to_string(f) + " has " +
                   std::to_string(payoff.values[f].size()) + " columns; |X|=" +
                   std::to_string(nx()));
    for (int x = 0; x < nx(); ++x)
      check_entry(payoff.values[f][x], payoff.k,
                  "payoff entry [" + std::to_string(f) + "][" + std::to_string(x) + "]");
  }

  switch (agg.kind) {
    case Aggregator::Kind::average:
      if (payoff.k != 1)
        fail_invalid("aggregator kind \"average\" requires payoff dimension k=1; got k=" +
                     std::to_string(payoff.k));
      break;
    case Aggregator::Kind::norm_of_average:
    case Aggregator::Kind::neg_norm_of_average:
      agg.norm.validate();
      break;
    case Aggregator::Kind::distance_to_set: {
      agg.norm.validate();
      if (agg.target.vertices.empty())
        fail_invalid("distance-to-set aggregator needs a nonempty target vertex list");
      for (std::size_t i = 0; i < agg.target.vertices.size(); ++i)
        check_entry(agg.target.vertices[i], payoff.k,
                    "target vertex [" + std::to_string(i) + "]");
      break;
    }
    case Aggregator::Kind::function_of_average:
      if (agg.fn.name != FnOfAverage::Name::max_coord) agg.fn.norm.validate();
      break;
  }

  if (phi.seqs.empty()) fail_invalid("transform set must be nonempty");
  std::set<std::string> names;
  for (std::size_t s = 0; s < phi.seqs.size(); ++s) {
    auto& seq = phi.seqs[s];
    if (seq.name.empty()) seq.name = "phi" + std::to_string(s);
    if (!names.insert(seq.name).second)
      fail_invalid("duplicate transform name \"" + seq.name + "\"");
    if (seq.steps.size() == 1 && T > 1)
      seq.steps.assign(static_cast<std::size_t>(T), seq.steps[0]);
    if (static_cast<int>(seq.steps.size()) != T)
      fail_invalid("transform \"" + seq.name + "\" has " + std::to_string(seq.steps.size()) +
                   " steps; expected 1 or T=" + std::to_string(T));
    for (int t = 0; t < T; ++t) {
      const auto& st = seq.steps[t];
      const std::string where =
          "transform \"" + seq.name + "\" step " + std::to_string(t);
      if (st.kind == TransformStep::Kind::departure) {
        if (static_cast<int>(st.map.size()) != nf())
          fail_invalid(where + " departure map has " + std::to_string(st.map.size()) +
                       " entries; |F|=" + std::to_string(nf()));
        for (int v : st.map)
          if (v < 0 || v >= nf())
            fail_invalid(where + " departure map entry " + std::to_string(v) +
                         " is outside [0, " + std::to_string(nf()) + ")");
      } else {
        if (static_cast<int>(st.table.size()) != nf())
          fail_invalid(where + " override table has " + std::to_string(st.table.size()) +
                       " rows; |F|=" + std::to_string(nf()));
        for (int f = 0; f < nf(); ++f) {
          if (static_cast<int>(st.table[f].size()) != nx())
            fail_invalid(where + " override row " + std::to_string(f) + " has " +
                         std::to_string(st.table[f].size()) + " columns; |X|=" +
                         std::to_string(nx()));
          for (int x = 0; x < nx(); ++x)
            check_entry(st.table[f][x], payoff.k, where + " override entry [" +
                                                      std::to_string(f) + "][" +
                                                      std::to_string(x) + "]");
        }
      }
    }
  }

  phi.time_invariant = true;
  phi.all_departure = true;
  for (const auto& seq : phi.seqs) {
    for (int t = 0; t < T; ++t) {
      if (!(seq.steps[t] == seq.steps[0])) phi.time_invariant = false;
      if (seq.steps[t].kind != TransformStep::Kind::departure) phi.all_departure = false;
    }
  }

  const NormSpec wn = work_norm();
  radius = 0;
  for (const auto& row : payoff.values)
    for (const auto& v : row) radius = std::max(radius, norm_of(wn, v));
  for (const auto& seq : phi.seqs)
    for (const auto& st : seq.steps)
      if (st.kind == TransformStep::Kind::payoff_override)
        for (const auto& row : st.table)
          for (const auto& v : row) radius = std::max(radius, norm_of(wn, v));
}

double aggregate_avg(const Aggregator& agg, const Vec& avg) {
  switch (agg.kind) {
    case Aggregator::Kind::average:
      return avg[0];
    case Aggregator::Kind::norm_of_average:
      return norm_of(agg.norm, avg);
    case Aggregator::Kind::neg_norm_of_average:
      return -norm_of(agg.norm, avg);
    case Aggregator::Kind::distance_to_set:
      return distance_to_hull(avg, agg.target.vertices, agg.norm).dist;
    case Aggregator::Kind::function_of_average:
      switch (agg.fn.name) {
        case FnOfAverage::Name::norm: return norm_of(agg.fn.norm, avg);
        case FnOfAverage::Name::neg_norm: return -norm_of(agg.fn.norm, avg);
        case FnOfAverage::Name::max_coord: return *std::max_element(avg.begin(), avg.end());
      }
  }
  fail_internal("unhandled aggregator kind");
}

double aggregate(const Aggregator& agg, const std::vector<Vec>& zs) {
  if (zs.empty()) return 0.0;
  const std::size_t k = zs[0].size();
  Vec avg(k, 0.0);
  for (const auto& z : zs) {
    if (z.size() != k) fail_invalid("aggregate: payoff entries must share one dimension");
    for (std::size_t j = 0; j < k; ++j) avg[j] += z[j];
  }
  for (auto& v : avg) v /= static_cast<double>(zs.size());
  return aggregate_avg(agg, avg);
}

double regret_of_history(const GameSpec& g, const History& h) {
  if (static_cast<int>(h.size()) != g.T)
    fail_invalid("history has " + std::to_string(h.size()) + " rounds; horizon T=" +
                 std::to_string(g.T));
  const std::size_t k = static_cast<std::size_t>(g.payoff.k);
  Vec realised(k, 0.0);
  for (int t = 0; t < g.T; ++t) {
    const auto [f, x] = h[t];
    if (f < 0 || f >= g.nf() || x < 0 || x >= g.nx())
      fail_invalid("history round " + std::to_string(t) + " indexes outside F x X");
    const Vec& z = g.loss(f, x);
    for (std::size_t j = 0; j < k; ++j) realised[j] += z[j];
  }
  for (auto& v : realised) v /= g.T;

  double best = 0;
  bool first = true;
  Vec comp(k);
  for (const auto& seq : g.phi.seqs) {
    std::fill(comp.begin(), comp.end(), 0.0);
    for (int t = 0; t < g.T; ++t) {
      const Vec& z = g.phi_loss(seq, t, h[t].first, h[t].second);
      for (std::size_t j = 0; j < k; ++j) comp[j] += z[j];
    }
    for (auto& v : comp) v /= g.T;
    const double b = aggregate_avg(g.agg, comp);
    if (first || b < best) { best = b; first = false; }
  }
  return aggregate_avg(g.agg, realised) - best;
}

}  // namespace olab
