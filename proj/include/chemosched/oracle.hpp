#pragma once

// Reference solvers for small instances: exhaustive enumeration of schedules
// and the backward Bellman recursion over forward-reachable states.  Both are
// deliberately simple and share no code with the label solver beyond the
// model dynamics.

#include <cstdint>
#include <limits>
#include <vector>

#include "chemosched/solve_report.hpp"

namespace chemosched {

// Upper bound on (treatments + 1)^K accepted by brute_force.
inline constexpr std::uint64_t kBruteForceLimit = std::uint64_t{1} << 24;

// Upper bound on the total number of reachable states accepted by bellman_solve.
inline constexpr std::size_t kBellmanStateLimit = std::size_t{1} << 22;

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Enumerates every schedule and keeps the feasible optimum.  optimum_count in
// the report is the exact number of optimal schedules.
SolveReport brute_force(const ProblemSpec& spec, const Objective& objective);

struct ValueEntry {
  double ls = 0.0;
  double value = kUnreachable;  // minimal cost over periods k..K, kUnreachable if none
};

// periods[k-1] holds the reachable states at the start of period k, sorted by
// log size.
struct ValueTable {
  std::vector<std::vector<ValueEntry>> periods;
};

struct BellmanResult {
  SolveReport report;
  ValueTable table;
};

// Single-treatment, spacing-free specs only (kUnsupported otherwise).
BellmanResult bellman_solve(const ProblemSpec& spec);

}  // namespace chemosched
