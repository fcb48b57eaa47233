#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "chemosched/model.hpp"

namespace chemosched {

// Program family.  P1: one treatment, no spacing.  P2: a menu of treatments,
// at most one per period.  P3: one treatment with spacing delta >= 1.
enum class Program { kP1, kP2, kP3 };

std::string_view to_string(Program program);
Program parse_program(std::string_view text);

// Throws kWrongBuilder if the spec does not have the shape the program expects.
void check_program_fits(const ProblemSpec& spec, Program program);

enum class ObjectiveKind { kMinCost, kMinMaxSize };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::kMinCost;
  double budget = 0.0;  // only meaningful for kMinMaxSize

  static Objective min_cost() { return {ObjectiveKind::kMinCost, 0.0}; }
  static Objective min_max_size(double budget);

  bool tracks_max() const noexcept { return kind == ObjectiveKind::kMinMaxSize; }
};

// Absolute slack on cost comparisons (costs are sums of a few decimal values).
inline constexpr double kCostTolerance = 1e-9;

enum class SolveStatus { kOptimal, kInfeasible };

std::string_view to_string(SolveStatus status);

struct SpacingStats {
  // Treatment-free periods between consecutive treatments; absent when fewer
  // than two treatments were administered.
  std::optional<int> min_gap;
  std::optional<int> max_gap;
};

SpacingStats spacing_stats(const Schedule& schedule);

struct SolveReport {
  SolveStatus status = SolveStatus::kInfeasible;
  Objective objective;
  // Cost for kMinCost, maximum tracked size for kMinMaxSize.
  double objective_value = 0.0;
  double cost = 0.0;
  double max_size = 0.0;
  double max_log_size = 0.0;
  int max_size_index = 0;
  Schedule schedule;
  Trajectory trajectory;
  std::vector<int> treatment_counts;  // per menu position
  SpacingStats spacing;

  // Solver diagnostics.  terminal_labels counts undominated terminal labels
  // (alternate optima may exist among them); optimum_count is exact and only
  // filled in by the exhaustive oracle.
  std::uint64_t labels_explored = 0;
  std::uint64_t labels_pruned = 0;  // removed by dominance
  std::uint64_t labels_merged = 0;  // collided with an equal state
  std::uint64_t terminal_labels = 0;
  std::optional<std::uint64_t> optimum_count;
  double wall_seconds = 0.0;
};

// Fills trajectory, cost, max size, counts and spacing of an optimal report
// from its schedule.  Throws kInternal if the schedule is infeasible.
void finalize_report(const ProblemSpec& spec, SolveReport& report);

}  // namespace chemosched
