#include "chemosched/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chemosched {

int MilpModel::add_variable(Variable v) {
  variables.push_back(std::move(v));
  return static_cast<int>(variables.size()) - 1;
}

int MilpModel::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::size_t MilpModel::count(VarKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(variables.begin(), variables.end(), [&](const Variable& v) { return v.kind == kind; }));
}

std::size_t MilpModel::count_family(std::string_view fam) const {
  return static_cast<std::size_t>(
      std::count_if(constraints.begin(), constraints.end(), [&](const Constraint& c) { return c.family == fam; }));
}

namespace {

std::string binary_name(int period, int treatment, bool menu) {
  std::string name = "X_" + std::to_string(period);
  if (menu) name += "_" + std::to_string(treatment);
  return name;
}

std::string ls_name(int index) { return "LS_" + std::to_string(index); }

// Shared skeleton of P1, P2 and P3: binaries, log sizes, cost objective,
// fixing row, recurrence and forced periods.  `menu` selects the per-treatment
// binaries of P2.
MilpModel build_core(const ProblemSpec& spec, bool menu, std::string label) {
  require_valid(spec);
  MilpModel model;
  model.label = std::move(label);
  const int K = spec.horizon;
  const int n = static_cast<int>(spec.treatments.size());

  // binaries[k-1][i-1]
  std::vector<std::vector<int>> binaries(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    for (int i = 1; i <= n; ++i) {
      binaries[static_cast<std::size_t>(k - 1)].push_back(
          model.add_variable({binary_name(k, i, menu), VarKind::kBinary, 0.0, 1.0}));
    }
  }
  const double log_min = std::log(spec.s_min);
  const double log_tol = std::log(spec.s_tol);
  std::vector<int> ls;
  for (int index = 1; index <= spec.tracked_indices(); ++index) {
    ls.push_back(model.add_variable({ls_name(index), VarKind::kContinuous, log_min, log_tol}));
  }

  for (int k = 1; k <= K; ++k) {
    for (int i = 1; i <= n; ++i) {
      model.objective.push_back(
          {binaries[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i - 1)],
           spec.treatments[static_cast<std::size_t>(i - 1)].cost});
    }
  }

  model.constraints.push_back(
      {"fix_1", std::string(family::kFix), {{ls[0], 1.0}}, Sense::kEqual, std::log(spec.s_init)});

  std::vector<double> log_keep;
  for (const Treatment& t : spec.treatments) log_keep.push_back(std::log1p(-t.reduction));
  const double beta = spec.growth.beta();
  const double log_alpha = spec.growth.log_alpha();
  for (int index = 2; index <= spec.tracked_indices(); ++index) {
    const int target = ls[static_cast<std::size_t>(index - 1)];
    const int previous = ls[static_cast<std::size_t>(index - 2)];
    const auto& x = binaries[static_cast<std::size_t>(index - 2)];
    if (spec.floor_mode) {
      MaxEquality eq{"rec_" + std::to_string(index), target, {{previous, beta}}, log_alpha, log_min};
      for (int i = 0; i < n; ++i) eq.terms.push_back({x[static_cast<std::size_t>(i)], log_keep[static_cast<std::size_t>(i)]});
      model.max_equalities.push_back(std::move(eq));
    } else {
      Constraint row{"rec_" + std::to_string(index), std::string(family::kRecurrence), {{target, 1.0}, {previous, -beta}},
                     Sense::kEqual, log_alpha};
      for (int i = 0; i < n; ++i) row.terms.push_back({x[static_cast<std::size_t>(i)], -log_keep[static_cast<std::size_t>(i)]});
      model.constraints.push_back(std::move(row));
    }
  }

  for (int k : spec.forced_periods) {
    Constraint row{"force_" + std::to_string(k), std::string(family::kForced), {}, Sense::kEqual, 1.0};
    for (int var : binaries[static_cast<std::size_t>(k - 1)]) row.terms.push_back({var, 1.0});
    model.constraints.push_back(std::move(row));
  }
  return model;
}

}  // namespace

int binary_index(const MilpModel& model, int period, int treatment) {
  int idx = model.find(binary_name(period, treatment, true));
  if (idx < 0 && treatment == 1) idx = model.find(binary_name(period, treatment, false));
  return idx;
}

MilpModel build_p1(const ProblemSpec& spec) {
  check_program_fits(spec, Program::kP1);
  return build_core(spec, false, "P1");
}

MilpModel build_p2(const ProblemSpec& spec) {
  check_program_fits(spec, Program::kP2);
  MilpModel model = build_core(spec, true, "P2");
  const int n = static_cast<int>(spec.treatments.size());
  for (int k = 1; k <= spec.horizon; ++k) {
    Constraint row{"amo_" + std::to_string(k), std::string(family::kAtMostOne), {}, Sense::kLessEqual, 1.0};
    for (int i = 1; i <= n; ++i) row.terms.push_back({model.find(binary_name(k, i, true)), 1.0});
    model.constraints.push_back(std::move(row));
  }
  return model;
}

MilpModel build_p3(const ProblemSpec& spec) {
  check_program_fits(spec, Program::kP3);
  MilpModel model = build_core(spec, false, "P3");
  const int K = spec.horizon;
  const int delta = spec.spacing_delta;
  auto x = [&](int k) { return model.find(binary_name(k, 1, false)); };

  // X_{k+1} + ... + X_{k+delta} <= delta (1 - X_k) for k = 1..K-delta.
  for (int k = 1; k <= K - delta; ++k) {
    Constraint row{"space_" + std::to_string(k), std::string(family::kSpacing), {{x(k), static_cast<double>(delta)}},
                   Sense::kLessEqual, static_cast<double>(delta)};
    for (int j = 1; j <= delta; ++j) row.terms.push_back({x(k + j), 1.0});
    model.constraints.push_back(std::move(row));
  }
  // The family above stops at K-delta, which would let treatments in the last
  // delta periods sit next to each other.  Truncated windows close that gap.
  for (int k = std::max(1, K - delta + 1); k <= K - 1; ++k) {
    Constraint row{"spacetail_" + std::to_string(k), std::string(family::kSpacingTail),
                   {{x(k), static_cast<double>(delta)}}, Sense::kLessEqual, static_cast<double>(delta)};
    for (int j = k + 1; j <= K; ++j) row.terms.push_back({x(j), 1.0});
    model.constraints.push_back(std::move(row));
  }
  return model;
}

MilpModel build_pi(const ProblemSpec& spec, Program base, double budget) {
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw Error(ErrorKind::kDomain, "budget must be a finite nonnegative number");
  }
  MilpModel model = base == Program::kP1 ? build_p1(spec) : base == Program::kP2 ? build_p2(spec) : build_p3(spec);
  std::ostringstream label;
  label << "pi" << (base == Program::kP1 ? 1 : base == Program::kP2 ? 2 : 3) << "(" << budget << ")";
  model.label = label.str();

  Constraint budget_row{"budget", std::string(family::kBudget), model.objective, Sense::kLessEqual, budget};
  model.constraints.push_back(std::move(budget_row));
  model.budget = budget;

  const double inf = std::numeric_limits<double>::infinity();
  const int top = model.add_variable({"LSmax", VarKind::kContinuous, -inf, inf});
  for (int index = 1; index <= spec.tracked_indices(); ++index) {
    model.constraints.push_back({"maxlink_" + std::to_string(index), std::string(family::kMaxLink),
                                 {{top, 1.0}, {model.find(ls_name(index)), -1.0}}, Sense::kGreaterEqual, 0.0});
  }
  model.objective = {{top, 1.0}};
  return model;
}

MilpModel build(const ProblemSpec& spec, Program program, const Objective& objective) {
  if (objective.kind == ObjectiveKind::kMinMaxSize) return build_pi(spec, program, objective.budget);
  switch (program) {
    case Program::kP1: return build_p1(spec);
    case Program::kP2: return build_p2(spec);
    case Program::kP3: return build_p3(spec);
  }
  throw Error(ErrorKind::kInternal, "unknown program");
}

namespace {

bool row_holds(double lhs, Sense sense, double rhs) {
  const double tol = 1e-9 * std::max(1.0, std::abs(rhs));
  switch (sense) {
    case Sense::kLessEqual: return lhs <= rhs + tol;
    case Sense::kGreaterEqual: return lhs >= rhs - tol;
    case Sense::kEqual: return std::abs(lhs - rhs) <= tol;
  }
  return false;
}

}  // namespace

AssignmentCheck evaluate_assignment(const MilpModel& model, const Schedule& schedule) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  AssignmentCheck check;
  std::vector<double>& v = check.values;
  v.assign(model.variables.size(), nan);

  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    if (model.variables[i].kind == VarKind::kBinary) v[i] = 0.0;
  }
  for (int k = 1; k <= schedule.horizon(); ++k) {
    const int choice = schedule.treatment_at(k);
    if (choice == Schedule::kNoTreatment) continue;
    const int idx = binary_index(model, k, choice);
    if (idx < 0) {
      throw Error(ErrorKind::kDomain, "schedule choice in period " + std::to_string(k) + " has no model binary");
    }
    v[static_cast<std::size_t>(idx)] = 1.0;
  }
  if (binary_index(model, schedule.horizon() + 1, 1) >= 0 || binary_index(model, schedule.horizon(), 1) < 0) {
    throw Error(ErrorKind::kDomain, "schedule horizon does not match the model");
  }

  auto known = [&](int var) { return !std::isnan(v[static_cast<std::size_t>(var)]); };

  // Equality rows with a single unknown determine that variable; max rows
  // determine their target once the right-hand side is known.
  for (bool progress = true; progress;) {
    progress = false;
    for (const Constraint& row : model.constraints) {
      if (row.sense != Sense::kEqual) continue;
      int unknown = -1;
      int unknowns = 0;
      double rest = 0.0;
      double coef = 0.0;
      for (const Term& t : row.terms) {
        if (known(t.var)) {
          rest += t.coef * v[static_cast<std::size_t>(t.var)];
        } else {
          ++unknowns;
          unknown = t.var;
          coef = t.coef;
        }
      }
      if (unknowns == 1 && coef != 0.0) {
        v[static_cast<std::size_t>(unknown)] = (row.rhs - rest) / coef;
        progress = true;
      }
    }
    for (const MaxEquality& eq : model.max_equalities) {
      if (known(eq.target)) continue;
      if (!std::all_of(eq.terms.begin(), eq.terms.end(), [&](const Term& t) { return known(t.var); })) continue;
      double expr = eq.constant;
      for (const Term& t : eq.terms) expr += t.coef * v[static_cast<std::size_t>(t.var)];
      v[static_cast<std::size_t>(eq.target)] = std::max(expr, eq.floor);
      progress = true;
    }
  }

  // Remaining continuous variables (LSmax) take the smallest value their
  // one-sided rows allow.
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (known(static_cast<int>(i))) continue;
    double lower = model.variables[i].lower;
    for (const Constraint& row : model.constraints) {
      double rest = 0.0;
      double coef = 0.0;
      bool single = true;
      for (const Term& t : row.terms) {
        if (t.var == static_cast<int>(i)) {
          coef += t.coef;
        } else if (known(t.var)) {
          rest += t.coef * v[static_cast<std::size_t>(t.var)];
        } else {
          single = false;
        }
      }
      if (!single || coef == 0.0) continue;
      const double bound = (row.rhs - rest) / coef;
      if ((row.sense == Sense::kGreaterEqual && coef > 0.0) || (row.sense == Sense::kLessEqual && coef < 0.0)) {
        lower = std::max(lower, bound);
      }
    }
    v[i] = std::isfinite(lower) ? lower : 0.0;
  }

  for (const Constraint& row : model.constraints) {
    double lhs = 0.0;
    for (const Term& t : row.terms) lhs += t.coef * v[static_cast<std::size_t>(t.var)];
    if (!row_holds(lhs, row.sense, row.rhs)) check.violations.push_back(row.name);
  }
  for (const MaxEquality& eq : model.max_equalities) {
    double expr = eq.constant;
    for (const Term& t : eq.terms) expr += t.coef * v[static_cast<std::size_t>(t.var)];
    if (!row_holds(v[static_cast<std::size_t>(eq.target)], Sense::kEqual, std::max(expr, eq.floor))) {
      check.violations.push_back(eq.name);
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Variable& var = model.variables[i];
    if (v[i] < var.lower - kLogTolerance || v[i] > var.upper + kLogTolerance) {
      check.violations.push_back("bound:" + var.name);
    }
  }
  for (const Term& t : model.objective) check.objective += t.coef * v[static_cast<std::size_t>(t.var)];
  check.feasible = check.violations.empty();
  return check;
}

}  // namespace chemosched
