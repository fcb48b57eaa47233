#include "chemosched/random_instances.hpp"

#include <algorithm>
#include <cmath>

namespace chemosched {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

ProblemSpec random_instance(std::mt19937_64& rng, const RandomInstanceOptions& options) {
  ProblemSpec spec;
  const int n = uniform_int(rng, 1, options.max_treatments);
  int max_k = options.max_horizon;
  if (n == 2) max_k = std::min(max_k, 14);
  if (n == 3) max_k = std::min(max_k, 11);
  spec.horizon = uniform_int(rng, options.min_horizon, std::max(options.min_horizon, max_k));

  spec.s_tol = 500.0;
  spec.s_min = spec.s_tol * uniform(rng, 0.02, 0.3);
  spec.s_init = uniform(rng, spec.s_min * 1.2, spec.s_tol);
  if (uniform_int(rng, 0, 1) == 0) {
    spec.growth = GrowthLaw(uniform(rng, 1.2, 2.0), 1.0);
  } else {
    const double b = uniform(rng, 0.05, 0.4);
    const double phi0 = uniform(rng, 10.0, 100.0);
    const double plateau = spec.s_tol * uniform(rng, 1.5, 10.0);
    spec.growth = gompertz_coefficients({phi0, b * std::log(plateau / phi0), b});
  }
  for (int i = 1; i <= n; ++i) {
    spec.treatments.push_back({i, static_cast<double>(uniform_int(rng, 3, 20)), uniform(rng, 0.3, 0.8)});
  }
  spec.spacing_delta = options.deltas[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(options.deltas.size()) - 1))];
  if (options.allow_floor_mode) spec.floor_mode = uniform_int(rng, 0, 3) == 0;
  if (options.randomize_terminal) spec.include_terminal = uniform_int(rng, 0, 1) == 0;
  if (options.allow_forced && uniform_int(rng, 0, 2) == 0) {
    spec.forced_periods.insert(uniform_int(rng, 1, spec.horizon));
  }
  return spec;
}

Schedule random_schedule(std::mt19937_64& rng, const ProblemSpec& spec) {
  Schedule schedule = Schedule::untreated(spec.horizon);
  const int n = static_cast<int>(spec.treatments.size());
  for (int& c : schedule.choice) c = uniform_int(rng, 0, n);
  return schedule;
}

}  // namespace chemosched
