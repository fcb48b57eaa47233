#include "chemosched/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chemosched {

double threshold(const ProblemSpec& spec) {
  return std::exp((std::log(spec.s_tol) - spec.growth.log_alpha()) / spec.growth.beta());
}

HeuristicResult heuristic_schedule(const ProblemSpec& spec) {
  require_valid(spec);
  if (spec.treatments.size() != 1 || spec.spacing_delta != 0 || !spec.forced_periods.empty()) {
    throw Error(ErrorKind::kUnsupported,
                "threshold heuristic needs one treatment, no spacing constraint and no forced periods");
  }

  HeuristicResult result;
  result.threshold = threshold(spec);
  const double log_threshold = std::log(result.threshold);
  const std::vector<double> shifts = action_shifts(spec);
  const double beta = spec.growth.beta();
  const double log_floor = std::log(spec.s_min);

  result.schedule = Schedule::untreated(spec.horizon);
  double ls = std::log(spec.s_init);
  for (int k = 1; k <= spec.horizon; ++k) {
    const bool checked = k < spec.horizon || spec.include_terminal;
    // Strict: a size sitting on the threshold (within tolerance) is left alone.
    const bool treat_now = checked && ls > log_threshold + kLogTolerance;
    double next = shifts[treat_now ? 1 : 0] + beta * ls;
    if (spec.floor_mode) next = std::max(next, log_floor);
    if (checked && next > std::log(spec.s_tol) + kLogTolerance) {
      throw Error(ErrorKind::kInfeasibleInstance,
                  "heuristic: treating in period " + std::to_string(k) + " still leaves S_" + std::to_string(k + 1) +
                      " above s_tol");
    }
    if (checked && next < log_floor - kLogTolerance) {
      throw Error(ErrorKind::kInfeasibleInstance,
                  "heuristic: treatment in period " + std::to_string(k) + " would push S_" + std::to_string(k + 1) +
                      " below s_min");
    }
    if (treat_now) result.schedule.choice[static_cast<std::size_t>(k - 1)] = 1;
    ls = next;
  }

  Simulation sim = simulate(spec, result.schedule);
  if (!sim.feasibility.feasible()) {
    throw Error(ErrorKind::kInternal, "heuristic schedule fails re-simulation");
  }
  result.trajectory = std::move(sim.trajectory);
  result.cost = schedule_cost(spec, result.schedule);
  result.optimality_certified = commutation_holds(spec).front();
  return result;
}

bool commutation_holds_raw(double alpha, double beta, double reduction, double s_lo, double s_hi) {
  const double keep = 1.0 - reduction;
  const bool analytic = keep <= std::pow(keep, beta);

  auto f = [&](double s) { return alpha * std::pow(s, beta); };
  auto g = [&](double s) { return keep * f(s); };
  bool numeric = true;
  constexpr int kSamples = 100;
  const double log_lo = std::log(s_lo);
  const double log_hi = std::log(s_hi);
  for (int i = 0; i < kSamples; ++i) {
    const double s = std::exp(log_lo + (log_hi - log_lo) * i / (kSamples - 1));
    const double later = g(f(s));
    const double earlier = f(g(s));
    if (later > earlier * (1.0 + 1e-12)) numeric = false;
  }
  if (analytic != numeric) {
    throw Error(ErrorKind::kInternal, "commutation check: analytic and sampled verdicts disagree");
  }
  return analytic;
}

std::vector<bool> commutation_holds(const ProblemSpec& spec) {
  std::vector<bool> out;
  out.reserve(spec.treatments.size());
  for (const Treatment& t : spec.treatments) {
    out.push_back(
        commutation_holds_raw(spec.growth.alpha(), spec.growth.beta(), t.reduction, spec.s_min, spec.s_tol));
  }
  return out;
}

}  // namespace chemosched
