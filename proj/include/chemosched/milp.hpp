#pragma once

// Explicit mixed-integer linear models of the scheduling programs.
//
//   P1      min sum p X_k          LS_1 = log S_init
//                                  LS_k - beta LS_{k-1} - log(1-RF) X_{k-1} = log alpha
//                                  log S_min <= LS_k <= log S_Tol,  X_k binary
//   P2      as P1 with one binary per (period, treatment), the recurrence
//           carrying one log(1-RF_i) coefficient per treatment and
//           sum_i X_{k,i} <= 1 per period.  The linearization of the
//           recurrence is only valid together with that at-most-one row, so
//           the builder always emits it.
//   P3      P1 plus X_{k+1} + ... + X_{k+delta} + delta X_k <= delta.
//   pi(C)   any of the above with objective min LSmax, LSmax - LS_k >= 0 for
//           every tracked k and sum p X <= C.
//
// Forced periods add X_k = 1 (sum over the menu for P2).  In floor mode the
// recurrence becomes LS_k = max(expr, log S_min), stored as a MaxEquality and
// linearized with an auxiliary binary per period when exported.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemosched/solve_report.hpp"

namespace chemosched {

enum class VarKind { kBinary, kContinuous };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Constraint {
  std::string name;
  std::string family;
  std::vector<Term> terms;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;
};

// target = max(sum terms + constant, floor)
struct MaxEquality {
  std::string name;
  int target = 0;
  std::vector<Term> terms;
  double constant = 0.0;
  double floor = 0.0;
};

enum class ObjectiveSense { kMinimize, kMaximize };

struct MilpModel {
  std::string label;  // "P1", "pi2(204)", ...
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  std::vector<MaxEquality> max_equalities;
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<Term> objective;
  std::optional<double> budget;

  int add_variable(Variable v);
  // -1 when absent.
  int find(std::string_view name) const;
  std::size_t count(VarKind kind) const;
  std::size_t count_family(std::string_view family) const;
};

// Family names used by the builders.
namespace family {
inline constexpr std::string_view kFix = "fix";
inline constexpr std::string_view kRecurrence = "recurrence";
inline constexpr std::string_view kAtMostOne = "at_most_one";
inline constexpr std::string_view kSpacing = "spacing";
inline constexpr std::string_view kSpacingTail = "spacing_tail";
inline constexpr std::string_view kForced = "forced";
inline constexpr std::string_view kBudget = "budget";
inline constexpr std::string_view kMaxLink = "max_link";
inline constexpr std::string_view kFloorLink = "floor_link";
}  // namespace family

MilpModel build_p1(const ProblemSpec& spec);
MilpModel build_p2(const ProblemSpec& spec);
MilpModel build_p3(const ProblemSpec& spec);
MilpModel build_pi(const ProblemSpec& spec, Program base, double budget);
MilpModel build(const ProblemSpec& spec, Program program, const Objective& objective);

// Binary variable index of (period, treatment position); treatment is ignored
// for single-treatment models.
int binary_index(const MilpModel& model, int period, int treatment);

struct AssignmentCheck {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> values;            // one per variable
  std::vector<std::string> violations;   // names of violated rows and bounds
};

// Fixes the binaries to a schedule, derives the continuous variables from the
// equality rows (LSmax at its smallest admissible value) and checks every row
// and bound at 1e-9.
AssignmentCheck evaluate_assignment(const MilpModel& model, const Schedule& schedule);

// CPLEX-style LP text.  Coefficients use 17 significant digits.
std::string export_lp(const MilpModel& model);

// Parses the LP subset written by export_lp.  Row families are recovered from
// the row name prefixes.
MilpModel parse_lp(std::string_view text);

}  // namespace chemosched
