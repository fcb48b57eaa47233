#pragma once

// The two published parameter sets, 52 periods each.
//
//   exponential: phi0 50, b = e^1.5 (alpha = ln b = 1.5), S_init 50, S_min 10
//   gompertz:    phi0 50, a 0.72, b 0.18, S_init 150, S_min 60
//   both:        S_Tol 500, single treatment RF 0.6 at cost 10, menu
//                {0.6 @ 10, 0.7 @ 13}, spacing delta 1 for P3

#include "chemosched/solve_report.hpp"

namespace chemosched {

enum class GrowthModel { kExponential, kGompertz };

// Spec shaped for `program`: the single treatment for P1 and P3 (with
// delta 1 for P3), the two-treatment menu for P2.
ProblemSpec reference_spec(GrowthModel model, Program program);

}  // namespace chemosched
