#pragma once

// Re-runs the nine cells of either published results table.  A cell asserts
// costs exactly, max sizes to +-0.01 and treatment counts where the published
// value is determined by the optimum; values that depend on which of several
// optimal schedules is returned are carried as notes only.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemosched/reference_instances.hpp"
#include "chemosched/solve_report.hpp"

namespace chemosched {

enum class ResultsTable { kTable2, kTable4 };

std::string_view to_string(ResultsTable table);
// kParse for anything other than "table2" / "table4".
ResultsTable parse_results_table(std::string_view text);

inline constexpr double kSizeTolerance = 0.01;

struct CellCheck {
  std::string what;  // "cost", "max_size", "count_1", "wall_seconds"
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CellSpec {
  std::string name;  // "P1", "pi2(204)", ...
  Program program = Program::kP1;
  Objective objective;
  std::optional<double> cost;
  std::optional<double> max_size;
  std::vector<int> counts;
  std::optional<double> note_max_size;  // published but not asserted
  std::vector<int> note_counts;
};

struct CellResult {
  CellSpec cell;
  SolveReport report;
  std::vector<CellCheck> checks;
  std::vector<std::string> notes;

  bool pass() const;
};

struct Reproduction {
  ResultsTable table = ResultsTable::kTable2;
  bool include_terminal = true;
  double time_limit_seconds = 0.0;
  std::vector<CellResult> cells;

  bool pass() const;
};

std::vector<CellSpec> table_cells(ResultsTable table);
GrowthModel table_growth(ResultsTable table);

CellResult run_cell(ResultsTable table, const CellSpec& cell, double time_limit_seconds);

// Cells run on up to `threads` workers (0: hardware concurrency).
Reproduction reproduce(ResultsTable table, unsigned threads = 0);

// Human-readable pass/fail grid.
std::string format_reproduction(const Reproduction& result);

}  // namespace chemosched
