#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace olab {

struct NormSpec {
  enum class Kind { l1, l2, lq, linf };
  Kind kind = Kind::l2;
  double q = 2.0;  // only read when kind == lq

  void validate() const;
  std::string name() const;  // "l1", "l2", "lq(3)", "linf"
};

double norm_of(const NormSpec&, const Vec&);

// (sigma, p) smoothness constants: for q in (1,2] the q-th power of the norm is
// (q, q)-smooth; for q in [2, inf) the squared norm is (2(q-1), 2)-smooth.
// l1 and linf carry no smoothness pair.
struct Smoothness {
  double sigma = 0, p = 2;
};
std::optional<Smoothness> smoothness_pair(const NormSpec&);

// Distance from y to the convex hull of `verts` under the given norm.
// l1/linf solve an exact LP; l2 and lq run away-step Frank-Wolfe (documented
// accuracy ~1e-8 on unit-scale data). `witness` is the nearest hull point found
// and `lambda` its hull coefficients.
struct DistanceResult {
  double dist = 0;
  Vec witness;
  Vec lambda;
};
DistanceResult distance_to_hull(const Vec& y, const std::vector<Vec>& verts, const NormSpec&);

}  // namespace olab
