#pragma once

// Seeded generator of small valid instances for oracle comparisons.
//
// Growth is either exponential (alpha in [1.2, 2]) or Gompertz with a
// plateau phi0 e^(a/b) placed 1.5x to 10x above S_Tol, so that growth holds
// over the whole band.  Costs are whole numbers so that cost sums are exact.

#include <cstdint>
#include <random>
#include <vector>

#include "chemosched/model.hpp"

namespace chemosched {

struct RandomInstanceOptions {
  int min_horizon = 4;
  int max_horizon = 14;
  int max_treatments = 3;
  std::vector<int> deltas{0, 1, 2};
  bool allow_floor_mode = false;
  bool allow_forced = false;
  bool randomize_terminal = false;
};

// Horizons are capped so that (treatments + 1)^K stays below 3^14.
ProblemSpec random_instance(std::mt19937_64& rng, const RandomInstanceOptions& options = {});

// Uniform over (menu + 1)^K, ignoring spacing and band.
Schedule random_schedule(std::mt19937_64& rng, const ProblemSpec& spec);

}  // namespace chemosched
