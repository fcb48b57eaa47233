#pragma once

// Exact optimizer for the cost and min-max programs.
//
// Every log size is a deterministic function of the decisions taken so far,
// so a partial schedule is summarized by a label (cost, current log size,
// running max, spacing cooldown).  The solver sweeps forward one period at a
// time, expands each label by every admissible action, drops band violations
// and discards labels dominated by another label of the same period.  The
// optimum is read off the labels that survive period K.
//
// Outside floor mode a smaller log size is only an advantage while no
// affordable run of doses can push it under s_min, so a label with a smaller
// log size dominates only above that floor-safe threshold.  To keep the
// threshold tight the solver first runs a floor-blind pass (fast, feasible,
// possibly suboptimal); its cost caps the exact pass, together with a grid
// lower bound on the remaining cost.  For min-max the budget is the cap and
// the floor-blind max size prunes labels that cannot beat it.
//
// Among labels that collide on the same state the solver keeps the one whose
// decision sequence, compared from the most recent period backwards, treats
// later (and with the higher menu position).  This makes results deterministic
// and, for cost minimization, favours schedules that postpone treatment.

#include <cstdint>
#include <span>
#include <vector>

#include "chemosched/solve_report.hpp"

namespace chemosched {

struct Label {
  int period = 0;
  double cost = 0.0;
  double ls = 0.0;
  double ls_max = 0.0;
  int cooldown = 0;
  int parent = -1;
  int action = Schedule::kNoTreatment;
};

// Floor-blind dominance of b by a.  Throws kInternal when the labels belong
// to different periods.
bool dominates(const Label& a, const Label& b, bool tracking_max);

struct SolveOptions {
  bool prune_dominated = true;
  // Guard against runaway label sets (per period).
  std::size_t max_labels_per_period = std::size_t{1} << 24;
};

// Validates the spec and program/spec fit, then solves.
SolveReport solve(const ProblemSpec& spec, Program program, const Objective& objective,
                  const SolveOptions& options = {});

// Same algorithm without the program fit check: any menu size combined with
// any spacing delta.
SolveReport solve_spec(const ProblemSpec& spec, const Objective& objective, const SolveOptions& options = {});

struct SweepEntry {
  double budget = 0.0;
  SolveStatus status = SolveStatus::kInfeasible;
  double max_size = 0.0;
  SolveReport report;
};

// Min-max solve for each budget (sorted ascending).  Budgets are independent
// and run on up to `threads` worker threads (0: hardware concurrency).
std::vector<SweepEntry> sweep_budget(const ProblemSpec& spec, Program program, std::span<const double> budgets,
                                     unsigned threads = 0);

}  // namespace chemosched
