#pragma once

// Machine-readable artifacts.  Sizes are shown with two decimals, as in the
// published tables; JSON keeps the full value under an "_exact" key.  Wall
// times are left out so that repeated runs produce identical bytes.

#include <span>
#include <string>
#include <string_view>

#include "chemosched/heuristic.hpp"
#include "chemosched/solver.hpp"

namespace chemosched {

// "%.2f"
std::string two_decimals(double value);

std::string solve_report_json(const ProblemSpec& spec, Program program, const SolveReport& report);
std::string heuristic_json(const ProblemSpec& spec, const HeuristicResult& result);
std::string simulation_json(const ProblemSpec& spec, const Schedule& schedule, const Simulation& simulation);

// Header period,size,log_size,treated,treatment_id; rows 1..K+1.
std::string trajectory_csv(const ProblemSpec& spec, const Schedule& schedule, const Trajectory& trajectory);

// Header budget,max_size,status; max_size is empty for infeasible budgets.
std::string sweep_csv(std::span<const SweepEntry> entries);

}  // namespace chemosched
