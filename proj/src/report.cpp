#include "chemosched/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace chemosched {

namespace {

using nlohmann::ordered_json;

double rounded(double value) { return std::round(value * 100.0) / 100.0; }

std::string shortest(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

ordered_json schedule_json(const ProblemSpec& spec, const Schedule& schedule) {
  ordered_json periods = ordered_json::array();
  ordered_json ids = ordered_json::array();
  for (int k = 1; k <= schedule.horizon(); ++k) {
    const int choice = schedule.treatment_at(k);
    ids.push_back(choice == Schedule::kNoTreatment ? 0 : spec.treatments[static_cast<std::size_t>(choice - 1)].id);
    if (choice != Schedule::kNoTreatment) periods.push_back(k);
  }
  return {{"treated_periods", periods}, {"treatment_id_per_period", ids}};
}

ordered_json sizes_json(const Trajectory& trajectory) {
  ordered_json sizes = ordered_json::array();
  for (double s : trajectory.sizes) sizes.push_back(rounded(s));
  return sizes;
}

ordered_json counts_json(const ProblemSpec& spec, const std::vector<int>& counts) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.push_back({{"treatment_id", spec.treatments[i].id}, {"count", counts[i]}});
  }
  return out;
}

}  // namespace

std::string two_decimals(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::string solve_report_json(const ProblemSpec& spec, Program program, const SolveReport& report) {
  ordered_json doc;
  doc["program"] = std::string(to_string(program));
  doc["objective"] = report.objective.kind == ObjectiveKind::kMinCost ? "min-cost" : "min-max";
  if (report.objective.tracks_max()) doc["budget"] = report.objective.budget;
  doc["include_terminal"] = spec.include_terminal;
  doc["floor_mode"] = spec.floor_mode;
  doc["status"] = std::string(to_string(report.status));
  if (report.status == SolveStatus::kOptimal) {
    if (report.objective.tracks_max()) {
      doc["objective_value"] = rounded(report.objective_value);
    } else {
      doc["objective_value"] = report.objective_value;
    }
    doc["objective_value_exact"] = report.objective_value;
    doc["cost"] = report.cost;
    doc["max_size"] = rounded(report.max_size);
    doc["max_size_exact"] = report.max_size;
    doc["max_size_index"] = report.max_size_index;
    doc["treatment_counts"] = counts_json(spec, report.treatment_counts);
    ordered_json spacing;
    spacing["min_gap"] = report.spacing.min_gap ? ordered_json(*report.spacing.min_gap) : ordered_json(nullptr);
    spacing["max_gap"] = report.spacing.max_gap ? ordered_json(*report.spacing.max_gap) : ordered_json(nullptr);
    doc["spacing"] = spacing;
    doc["schedule"] = schedule_json(spec, report.schedule);
    doc["sizes"] = sizes_json(report.trajectory);
  }
  ordered_json diag;
  diag["labels_explored"] = report.labels_explored;
  diag["labels_pruned"] = report.labels_pruned;
  diag["labels_merged"] = report.labels_merged;
  diag["terminal_labels"] = report.terminal_labels;
  diag["optimum_count"] = report.optimum_count ? ordered_json(*report.optimum_count) : ordered_json(nullptr);
  doc["diagnostics"] = diag;
  return doc.dump(2) + "\n";
}

std::string heuristic_json(const ProblemSpec& spec, const HeuristicResult& result) {
  ordered_json doc;
  doc["threshold"] = rounded(result.threshold);
  doc["threshold_exact"] = result.threshold;
  doc["cost"] = result.cost;
  doc["optimality_certified"] = result.optimality_certified;
  doc["schedule"] = schedule_json(spec, result.schedule);
  doc["sizes"] = sizes_json(result.trajectory);
  return doc.dump(2) + "\n";
}

std::string simulation_json(const ProblemSpec& spec, const Schedule& schedule, const Simulation& simulation) {
  ordered_json doc;
  doc["feasible"] = simulation.feasibility.feasible();
  doc["cost"] = schedule_cost(spec, schedule);
  ordered_json band = ordered_json::array();
  for (const BandViolation& v : simulation.feasibility.band) {
    band.push_back({{"index", v.index},
                    {"size", rounded(v.size)},
                    {"size_exact", v.size},
                    {"bound", v.bound == Bound::kLower ? "s_min" : "s_tol"}});
  }
  doc["band_violations"] = band;
  ordered_json faults = ordered_json::array();
  for (const ScheduleViolation& v : simulation.feasibility.schedule) {
    const char* kind = v.fault == ScheduleFault::kSpacing         ? "spacing"
                       : v.fault == ScheduleFault::kForcedMissing ? "forced_missing"
                                                                  : "unknown_treatment";
    faults.push_back({{"period", v.period}, {"fault", kind}});
  }
  doc["schedule_violations"] = faults;
  doc["schedule"] = schedule_json(spec, schedule);
  doc["sizes"] = sizes_json(simulation.trajectory);
  return doc.dump(2) + "\n";
}

std::string trajectory_csv(const ProblemSpec& spec, const Schedule& schedule, const Trajectory& trajectory) {
  std::ostringstream out;
  out << "period,size,log_size,treated,treatment_id\n";
  for (std::size_t i = 0; i < trajectory.sizes.size(); ++i) {
    const int period = static_cast<int>(i) + 1;
    const int choice = period <= schedule.horizon() ? schedule.treatment_at(period) : Schedule::kNoTreatment;
    const int id =
        choice == Schedule::kNoTreatment ? 0 : spec.treatments[static_cast<std::size_t>(choice - 1)].id;
    char log_buf[40];
    std::snprintf(log_buf, sizeof log_buf, "%.17g", trajectory.log_sizes[i]);
    out << period << ',' << two_decimals(trajectory.sizes[i]) << ',' << log_buf << ','
        << (choice == Schedule::kNoTreatment ? 0 : 1) << ',' << id << '\n';
  }
  return out.str();
}

std::string sweep_csv(std::span<const SweepEntry> entries) {
  std::ostringstream out;
  out << "budget,max_size,status\n";
  for (const SweepEntry& e : entries) {
    out << shortest(e.budget) << ',' << (e.status == SolveStatus::kOptimal ? two_decimals(e.max_size) : "") << ','
        << to_string(e.status) << '\n';
  }
  return out.str();
}

}  // namespace chemosched
