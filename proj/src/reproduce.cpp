#include "chemosched/reproduce.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "chemosched/report.hpp"
#include "chemosched/solver.hpp"

namespace chemosched {

std::string_view to_string(ResultsTable table) { return table == ResultsTable::kTable2 ? "table2" : "table4"; }

ResultsTable parse_results_table(std::string_view text) {
  if (text == "table2") return ResultsTable::kTable2;
  if (text == "table4") return ResultsTable::kTable4;
  throw Error(ErrorKind::kParse, "unknown table '" + std::string(text) + "' (expected table2 or table4)");
}

bool CellResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CellCheck& c) { return c.pass; });
}

bool Reproduction::pass() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.pass(); });
}

GrowthModel table_growth(ResultsTable table) {
  return table == ResultsTable::kTable2 ? GrowthModel::kExponential : GrowthModel::kGompertz;
}

namespace {

CellSpec min_cost(std::string name, Program program, double cost) {
  CellSpec c;
  c.name = std::move(name);
  c.program = program;
  c.objective = Objective::min_cost();
  c.cost = cost;
  return c;
}

CellSpec min_max(Program program, double budget, double max_size) {
  CellSpec c;
  std::ostringstream name;
  name << "pi" << (program == Program::kP1 ? 1 : program == Program::kP2 ? 2 : 3) << "(" << budget << ")";
  c.name = name.str();
  c.program = program;
  c.objective = Objective::min_max_size(budget);
  c.max_size = max_size;
  return c;
}

CellCheck check(std::string what, double expected, double actual, double tolerance) {
  return {std::move(what), expected, actual, tolerance, std::abs(actual - expected) <= tolerance};
}

}  // namespace

std::vector<CellSpec> table_cells(ResultsTable table) {
  std::vector<CellSpec> cells;
  if (table == ResultsTable::kTable2) {
    CellSpec p1 = min_cost("P1", Program::kP1, 210);
    p1.max_size = 496.46;
    CellSpec p2 = min_cost("P2", Program::kP2, 204);
    p2.counts = {10, 8};
    p2.note_max_size = 493.50;
    CellSpec p3 = min_cost("P3", Program::kP3, 210);
    p3.note_max_size = 496.46;
    CellSpec pi2_217 = min_max(Program::kP2, 217, 148.05);
    pi2_217.note_counts = {10, 9};
    CellSpec pi2_204 = min_max(Program::kP2, 204, 493.50);
    pi2_204.note_counts = {10, 8};
    cells = {p1,
             p2,
             p3,
             min_max(Program::kP1, 210, 315.48),
             pi2_204,
             min_max(Program::kP3, 210, 315.48),
             min_max(Program::kP1, 220, 126.19),
             pi2_217,
             min_max(Program::kP3, 220, 126.19)};
  } else {
    CellSpec p1 = min_cost("P1", Program::kP1, 200);
    p1.max_size = 499.09;
    CellSpec p2 = min_cost("P2", Program::kP2, 191);
    p2.counts = {10, 7};
    p2.note_max_size = 499.09;
    CellSpec p3 = min_cost("P3", Program::kP3, 200);
    p3.max_size = 498.87;
    CellSpec pi2_191 = min_max(Program::kP2, 191, 493.41);
    pi2_191.note_counts = {10, 7};
    CellSpec pi2_204 = min_max(Program::kP2, 204, 435.78);
    pi2_204.counts = {19, 1};
    cells = {p1,
             p2,
             p3,
             min_max(Program::kP1, 200, 438.42),
             pi2_191,
             min_max(Program::kP3, 200, 438.42),
             min_max(Program::kP1, 210, 418.02),
             pi2_204,
             min_max(Program::kP3, 210, 418.02)};
  }
  return cells;
}

CellResult run_cell(ResultsTable table, const CellSpec& cell, double time_limit_seconds) {
  const ProblemSpec spec = reference_spec(table_growth(table), cell.program);
  CellResult result;
  result.cell = cell;
  result.report = solve(spec, cell.program, cell.objective);
  const SolveReport& r = result.report;
  if (r.status != SolveStatus::kOptimal) {
    result.checks.push_back({"status", 1.0, 0.0, 0.0, false});
    return result;
  }
  if (cell.cost) result.checks.push_back(check("cost", *cell.cost, r.cost, kCostTolerance));
  if (cell.max_size) result.checks.push_back(check("max_size", *cell.max_size, r.max_size, kSizeTolerance));
  for (std::size_t i = 0; i < cell.counts.size(); ++i) {
    const double actual = i < r.treatment_counts.size() ? r.treatment_counts[i] : 0.0;
    result.checks.push_back(check("count_" + std::to_string(i + 1), cell.counts[i], actual, 0.0));
  }
  CellCheck time{"wall_seconds", time_limit_seconds, r.wall_seconds, 0.0, r.wall_seconds <= time_limit_seconds};
  result.checks.push_back(time);

  if (cell.note_max_size) {
    result.notes.push_back("published max size " + two_decimals(*cell.note_max_size) + ", returned optimum " +
                           two_decimals(r.max_size) + " (optima are not unique; not asserted)");
  }
  if (!cell.note_counts.empty()) {
    std::ostringstream note;
    note << "published counts (";
    for (std::size_t i = 0; i < cell.note_counts.size(); ++i) note << (i ? ", " : "") << cell.note_counts[i];
    note << "), returned (";
    for (std::size_t i = 0; i < r.treatment_counts.size(); ++i) note << (i ? ", " : "") << r.treatment_counts[i];
    note << ") (not asserted)";
    result.notes.push_back(note.str());
  }
  return result;
}

Reproduction reproduce(ResultsTable table, unsigned threads) {
  Reproduction out;
  out.table = table;
  out.include_terminal = reference_spec(table_growth(table), Program::kP1).include_terminal;
  out.time_limit_seconds = table == ResultsTable::kTable2 ? 5.0 : 60.0;
  const std::vector<CellSpec> cells = table_cells(table);
  out.cells.resize(cells.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
          try {
            out.cells[i] = run_cell(table, cells[i], out.time_limit_seconds);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::string format_reproduction(const Reproduction& result) {
  std::ostringstream out;
  out << to_string(result.table) << ": include_terminal=" << (result.include_terminal ? "true" : "false")
      << " (S_{K+1} is band-checked and counted in the max size)\n";
  char line[256];
  for (const CellResult& cell : result.cells) {
    std::snprintf(line, sizeof line, "%-4s %-10s cost %7.2f  max %7.2f  counts", cell.pass() ? "PASS" : "FAIL",
                  cell.cell.name.c_str(), cell.report.cost, cell.report.max_size);
    out << line;
    for (int c : cell.report.treatment_counts) out << ' ' << c;
    std::snprintf(line, sizeof line, "  %.3fs\n", cell.report.wall_seconds);
    out << line;
    for (const CellCheck& c : cell.checks) {
      if (c.pass) continue;
      std::snprintf(line, sizeof line, "       mismatch %s: expected %.4f, got %.4f (tolerance %g)\n", c.what.c_str(),
                    c.expected, c.actual, c.tolerance);
      out << line;
    }
    for (const std::string& note : cell.notes) out << "       note: " << note << '\n';
  }
  out << (result.pass() ? "all cells pass\n" : "some cells fail\n");
  return out.str();
}

}  // namespace chemosched
