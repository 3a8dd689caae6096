#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/common.hpp"
#include "core/norms.hpp"

namespace olab {

// Per-round payoff table: values[f][x] is a k-vector.
struct PayoffTable {
  int k = 1;
  std::vector<std::vector<Vec>> values;
};

struct TargetSet {
  std::vector<Vec> vertices;  // convex hull of these points
};

struct FnOfAverage {
  enum class Name { norm, neg_norm, max_coord };
  Name name = Name::norm;
  NormSpec norm;  // read by norm / neg_norm
};

// How a payoff sequence is scored: every kind is a function of the running
// average, which is what makes order-collapsed memoisation sound downstream.
struct Aggregator {
  enum class Kind {
    average,             // k == 1: plain mean
    norm_of_average,     // ||avg||
    neg_norm_of_average, // -||avg||
    distance_to_set,     // dist(avg, hull(target))
    function_of_average  // registry entry applied to avg
  };
  Kind kind = Kind::average;
  NormSpec norm;
  TargetSet target;
  FnOfAverage fn;

  enum class Subadd { b, neg_b, neither };
  Subadd subadditivity() const;
  std::string kind_name() const;
};

// One round of a comparator transform: either relabel the player's action or
// replace the payoff entirely.
struct TransformStep {
  enum class Kind { departure, payoff_override };
  Kind kind = Kind::departure;
  std::vector<int> map;                       // departure: F -> F
  std::vector<std::vector<Vec>> table;        // override: [f][x] -> k-vector
  bool operator==(const TransformStep&) const = default;
};

struct TransformSeq {
  std::string name;
  std::vector<TransformStep> steps;  // exactly T once validated
};

struct TransformSet {
  std::vector<TransformSeq> seqs;
  bool time_invariant = false;  // derived: every sequence repeats one step
  bool all_departure = false;   // derived: every step is a departure
};

using History = std::vector<std::pair<int, int>>;

struct GameSpec {
  std::vector<std::string> F, X;
  int T = 1;
  PayoffTable payoff;
  Aggregator agg;
  TransformSet phi;
  double radius = 0;  // derived: max norm of any payoff entry, overrides included

  int nf() const { return static_cast<int>(F.size()); }
  int nx() const { return static_cast<int>(X.size()); }
  const Vec& loss(int f, int x) const { return payoff.values[f][x]; }
  const Vec& phi_loss(const TransformSeq& seq, int t, int f, int x) const {
    const TransformStep& s = seq.steps[t];
    return s.kind == TransformStep::Kind::departure ? payoff.values[s.map[f]][x]
                                                    : s.table[f][x];
  }
  // Norm used for radii and smoothness-derived quantities: the aggregator's norm
  // when it carries one, l2 otherwise.
  NormSpec work_norm() const;

  // Normalises (broadcasts 1-step sequences to length T, fills empty transform
  // names), derives flags and radius, and rejects malformed data.
  void validate();
};

// B applied to the average of a payoff sequence. Empty sequences score 0.
double aggregate_avg(const Aggregator&, const Vec& avg);
double aggregate(const Aggregator&, const std::vector<Vec>& zs);

// Reg(h) = B(realised payoffs) - min over transforms of B(transformed payoffs).
double regret_of_history(const GameSpec&, const History&);

}  // namespace olab
