#include "chemosched/solve_report.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chemosched {

std::string_view to_string(Program program) {
  switch (program) {
    case Program::kP1: return "p1";
    case Program::kP2: return "p2";
    case Program::kP3: return "p3";
  }
  return "?";
}

Program parse_program(std::string_view text) {
  if (text == "p1" || text == "P1") return Program::kP1;
  if (text == "p2" || text == "P2") return Program::kP2;
  if (text == "p3" || text == "P3") return Program::kP3;
  throw Error(ErrorKind::kDomain, "unknown program '" + std::string(text) + "' (expected p1, p2 or p3)");
}

void check_program_fits(const ProblemSpec& spec, Program program) {
  const std::size_t n = spec.treatments.size();
  switch (program) {
    case Program::kP1:
      if (n != 1 || spec.spacing_delta != 0) {
        throw Error(ErrorKind::kWrongBuilder, "p1 needs exactly one treatment and spacing delta 0");
      }
      return;
    case Program::kP2:
      if (n < 1 || spec.spacing_delta != 0) {
        throw Error(ErrorKind::kWrongBuilder, "p2 needs a nonempty menu and spacing delta 0");
      }
      return;
    case Program::kP3:
      if (n != 1 || spec.spacing_delta < 1) {
        throw Error(ErrorKind::kWrongBuilder, "p3 needs exactly one treatment and spacing delta >= 1");
      }
      return;
  }
}

Objective Objective::min_max_size(double budget) {
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorKind::kDomain, "budget must be a finite nonnegative number");
  }
  return {ObjectiveKind::kMinMaxSize, budget};
}

std::string_view to_string(SolveStatus status) {
  return status == SolveStatus::kOptimal ? "optimal" : "infeasible";
}

SpacingStats spacing_stats(const Schedule& schedule) {
  SpacingStats stats;
  const std::vector<int> periods = schedule.treated_periods();
  for (std::size_t i = 1; i < periods.size(); ++i) {
    const int gap = periods[i] - periods[i - 1] - 1;
    stats.min_gap = stats.min_gap ? std::min(*stats.min_gap, gap) : gap;
    stats.max_gap = stats.max_gap ? std::max(*stats.max_gap, gap) : gap;
  }
  return stats;
}

void finalize_report(const ProblemSpec& spec, SolveReport& report) {
  Simulation sim = simulate(spec, report.schedule);
  if (!sim.feasibility.feasible()) {
    throw Error(ErrorKind::kInternal, "optimal schedule fails re-simulation");
  }
  report.trajectory = std::move(sim.trajectory);
  report.cost = schedule_cost(spec, report.schedule);

  const auto& ls = report.trajectory.log_sizes;
  const auto tracked = static_cast<std::size_t>(spec.tracked_indices());
  const auto top = std::max_element(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(tracked));
  report.max_log_size = *top;
  report.max_size = report.trajectory.sizes[static_cast<std::size_t>(top - ls.begin())];
  report.max_size_index = static_cast<int>(top - ls.begin()) + 1;

  report.treatment_counts.assign(spec.treatments.size(), 0);
  for (std::size_t i = 0; i < spec.treatments.size(); ++i) {
    report.treatment_counts[i] = report.schedule.count(static_cast<int>(i) + 1);
  }
  report.spacing = spacing_stats(report.schedule);
  report.objective_value = report.objective.kind == ObjectiveKind::kMinCost ? report.cost : report.max_size;
}

}  // namespace chemosched
