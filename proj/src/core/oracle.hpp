#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "core/model.hpp"

namespace olab {

using Rat = boost::multiprecision::cpp_rational;

// Exact minimax value over the rationals: the same backward induction as
// exact_value but with every pivot and aggregation performed exactly.
// Restricted to |F|,|X| <= 4 and T <= 3, and to aggregators computable in
// rational arithmetic (average; norm/neg-norm/distance under l1 or linf;
// function-of-average max-coord). Payoff doubles convert to rationals exactly.
Rat exact_value_rational(const GameSpec&);

double rat_to_double(const Rat&);

}  // namespace olab
