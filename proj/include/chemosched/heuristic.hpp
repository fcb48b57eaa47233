#pragma once

// Threshold policy: treat at the start of period k iff S_k exceeds the size
// whose untreated growth lands exactly on S_Tol.  When treating later is never
// worse than treating earlier (g(f(S)) <= f(g(S))) the policy is optimal for
// the single-treatment, spacing-free problem.

#include <vector>

#include "chemosched/model.hpp"

namespace chemosched {

struct HeuristicResult {
  double threshold = 0.0;
  Schedule schedule;
  Trajectory trajectory;
  double cost = 0.0;
  bool optimality_certified = false;
};

// (S_Tol / alpha)^(1/beta), the solution of f(S) = S_Tol.
double threshold(const ProblemSpec& spec);

// Requires one treatment, spacing delta 0 and no forced periods
// (kUnsupported).  Throws kInfeasibleInstance naming the period when a
// mandated step leaves the band.
HeuristicResult heuristic_schedule(const ProblemSpec& spec);

// Per treatment: (1 - RF) <= (1 - RF)^beta, cross-checked numerically at 100
// sizes spanning the band (kInternal on disagreement).
std::vector<bool> commutation_holds(const ProblemSpec& spec);

// Same check on raw coefficients; beta is not restricted to (0, 1] here.
bool commutation_holds_raw(double alpha, double beta, double reduction, double s_lo, double s_hi);

}  // namespace chemosched
