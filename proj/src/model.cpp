#include "chemosched/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chemosched {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidGrowth: return "invalid-growth";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kInvalidSpec: return "invalid-spec";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kInfeasibleInstance: return "infeasible-instance";
    case ErrorKind::kWrongBuilder: return "wrong-builder";
    case ErrorKind::kSizeGuard: return "size-guard";
    case ErrorKind::kInternal: return "internal";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

GrowthLaw::GrowthLaw(double alpha, double beta) : alpha_(alpha), beta_(beta), log_alpha_(0.0) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) {
    throw Error(ErrorKind::kInvalidGrowth, "growth law: alpha must be positive");
  }
  if (!std::isfinite(beta) || !(beta > 0.0) || beta > 1.0) {
    throw Error(ErrorKind::kInvalidGrowth, "growth law: beta must lie in (0, 1]");
  }
  if (beta == 1.0 && !(alpha > 1.0)) {
    throw Error(ErrorKind::kInvalidGrowth,
                "growth law: exponential growth needs alpha > 1 (tumor would not grow)");
  }
  log_alpha_ = std::log(alpha);
}

double GrowthLaw::fixed_point() const noexcept {
  if (beta_ == 1.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_alpha_ / (1.0 - beta_));
}

GrowthLaw exponential_coefficients(const ExponentialParams& params) {
  if (!(params.phi0 > 0.0)) {
    throw Error(ErrorKind::kDomain, "exponential parameters: phi0 must be positive");
  }
  if (!(params.b > 1.0)) {
    throw Error(ErrorKind::kInvalidGrowth, "exponential parameters: b must exceed 1");
  }
  return GrowthLaw(std::log(params.b), 1.0);
}

GrowthLaw gompertz_coefficients(const GompertzParams& params) {
  if (!(params.phi0 > 0.0) || !(params.a > 0.0) || !(params.b > 0.0)) {
    throw Error(ErrorKind::kDomain, "Gompertz parameters: phi0, a and b must be positive");
  }
  const double beta = std::exp(-params.b);
  // log(alpha) = (1 - e^-b) * (log(phi0) + a/b); -expm1(-b) keeps precision for small b.
  const double log_alpha = -std::expm1(-params.b) * (std::log(params.phi0) + params.a / params.b);
  return GrowthLaw(std::exp(log_alpha), beta);
}

double grow(double size, const GrowthLaw& law) {
  return law.alpha() * std::pow(size, law.beta());
}

double treat(double size, const GrowthLaw& law, double reduction) {
  return (1.0 - reduction) * grow(size, law);
}

Schedule Schedule::untreated(int horizon) {
  return Schedule{std::vector<int>(static_cast<std::size_t>(std::max(horizon, 0)), kNoTreatment)};
}

Schedule Schedule::from_periods(int horizon, const std::vector<int>& periods, int treatment) {
  Schedule schedule = untreated(horizon);
  for (int period : periods) {
    if (period < 1 || period > horizon) {
      throw Error(ErrorKind::kDomain, "schedule: period " + std::to_string(period) + " outside horizon");
    }
    schedule.choice[static_cast<std::size_t>(period - 1)] = treatment;
  }
  return schedule;
}

std::vector<int> Schedule::treated_periods() const {
  std::vector<int> periods;
  for (std::size_t k = 0; k < choice.size(); ++k) {
    if (choice[k] != kNoTreatment) periods.push_back(static_cast<int>(k) + 1);
  }
  return periods;
}

int Schedule::count(int treatment) const {
  return static_cast<int>(std::count(choice.begin(), choice.end(), treatment));
}

namespace {

void check_schedule_shape(const ProblemSpec& spec, const Schedule& schedule) {
  if (schedule.horizon() != spec.horizon) {
    throw Error(ErrorKind::kDomain, "schedule length " + std::to_string(schedule.horizon()) +
                                        " does not match horizon " + std::to_string(spec.horizon));
  }
}

double reduction_of(const ProblemSpec& spec, int choice) {
  if (choice == Schedule::kNoTreatment) return 0.0;
  if (choice < 0 || static_cast<std::size_t>(choice) > spec.treatments.size()) {
    throw Error(ErrorKind::kDomain, "schedule refers to unknown treatment " + std::to_string(choice));
  }
  return spec.treatments[static_cast<std::size_t>(choice - 1)].reduction;
}

}  // namespace

std::vector<double> log_recurrence(const ProblemSpec& spec, const Schedule& schedule) {
  check_schedule_shape(spec, schedule);
  const double log_floor = std::log(spec.s_min);
  const double beta = spec.growth.beta();
  const std::vector<double> shifts = action_shifts(spec);

  std::vector<double> ls(static_cast<std::size_t>(spec.horizon) + 1);
  ls[0] = std::log(spec.s_init);
  for (int k = 1; k <= spec.horizon; ++k) {
    const int choice = schedule.choice[static_cast<std::size_t>(k - 1)];
    reduction_of(spec, choice);  // range check
    double next = shifts[static_cast<std::size_t>(choice)] + beta * ls[static_cast<std::size_t>(k - 1)];
    if (spec.floor_mode) next = std::max(next, log_floor);
    ls[static_cast<std::size_t>(k)] = next;
  }
  return ls;
}

std::vector<double> multiplicative_recurrence(const ProblemSpec& spec, const Schedule& schedule) {
  check_schedule_shape(spec, schedule);
  std::vector<double> sizes(static_cast<std::size_t>(spec.horizon) + 1);
  sizes[0] = spec.s_init;
  for (int k = 1; k <= spec.horizon; ++k) {
    const int choice = schedule.choice[static_cast<std::size_t>(k - 1)];
    const double prev = sizes[static_cast<std::size_t>(k - 1)];
    double next = treat(prev, spec.growth, reduction_of(spec, choice));
    if (spec.floor_mode) next = std::max(next, spec.s_min);
    sizes[static_cast<std::size_t>(k)] = next;
  }
  return sizes;
}

bool within_band(double log_size, const ProblemSpec& spec) {
  return log_size >= std::log(spec.s_min) - kLogTolerance && log_size <= std::log(spec.s_tol) + kLogTolerance;
}

Simulation simulate(const ProblemSpec& spec, const Schedule& schedule, bool enforce_band) {
  check_schedule_shape(spec, schedule);
  Simulation out;
  auto& faults = out.feasibility.schedule;
  int last_treated = 0;
  bool unknown = false;
  for (int k = 1; k <= spec.horizon; ++k) {
    const int choice = schedule.treatment_at(k);
    if (choice < 0 || static_cast<std::size_t>(choice) > spec.treatments.size()) {
      faults.push_back({k, ScheduleFault::kUnknownTreatment});
      unknown = true;
      continue;
    }
    if (choice != Schedule::kNoTreatment) {
      if (last_treated > 0 && k - last_treated <= spec.spacing_delta) faults.push_back({k, ScheduleFault::kSpacing});
      last_treated = k;
    } else if (spec.forced_periods.contains(k)) {
      faults.push_back({k, ScheduleFault::kForcedMissing});
    }
  }
  if (unknown) return out;

  const std::vector<double> ls = log_recurrence(spec, schedule);
  const std::vector<double> direct = multiplicative_recurrence(spec, schedule);

  Trajectory& traj = out.trajectory;
  traj.log_sizes = ls;
  traj.sizes.resize(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) {
    traj.sizes[i] = std::exp(ls[i]);
    const double rel = std::abs(traj.sizes[i] - direct[i]) / std::max(direct[i], std::numeric_limits<double>::min());
    if (!(rel <= 1e-9)) {
      throw Error(ErrorKind::kInternal, "log and multiplicative recurrences disagree at index " +
                                            std::to_string(i + 1));
    }
  }
  traj.treated.resize(static_cast<std::size_t>(spec.horizon));
  for (int k = 1; k <= spec.horizon; ++k) traj.treated[static_cast<std::size_t>(k - 1)] = schedule.treated(k);

  if (enforce_band) {
    const double lo = std::log(spec.s_min) - kLogTolerance;
    const double hi = std::log(spec.s_tol) + kLogTolerance;
    for (int index = 1; index <= spec.tracked_indices(); ++index) {
      const double v = ls[static_cast<std::size_t>(index - 1)];
      if (v < lo) out.feasibility.band.push_back({index, traj.sizes[static_cast<std::size_t>(index - 1)], Bound::kLower});
      if (v > hi) out.feasibility.band.push_back({index, traj.sizes[static_cast<std::size_t>(index - 1)], Bound::kUpper});
    }
  }
  return out;
}

std::vector<Diagnostic> validate_spec(const ProblemSpec& spec) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string code, std::string message) {
    out.push_back({Severity::kError, std::move(code), std::move(message)});
  };
  auto warning = [&](std::string code, std::string message) {
    out.push_back({Severity::kWarning, std::move(code), std::move(message)});
  };

  if (spec.horizon < 1) error("empty_horizon", "horizon K must be at least 1");
  if (!(spec.s_init > 0.0) || !(spec.s_min > 0.0) || !(spec.s_tol > 0.0)) {
    error("nonpositive_size", "s_init, s_min and s_tol must be positive");
    return out;
  }
  if (!(spec.s_min < spec.s_tol)) error("empty_band", "s_min must be below s_tol");
  if (!(spec.s_min < spec.s_init)) error("init_below_floor", "s_init must exceed s_min");
  if (!(spec.s_init <= spec.s_tol)) error("init_above_tolerance", "s_init exceeds s_tol");

  // f(S) > S on the band.  For beta < 1, f(S)/S decreases in S so the top of
  // the band is the binding point; for beta == 1 it reduces to alpha > 1.
  const double top = std::max(spec.s_tol, spec.s_min);
  if (!(grow(top, spec.growth) > top)) {
    error("no_growth", "growth law does not satisfy f(S) > S over [s_min, s_tol]");
  }

  if (spec.treatments.empty()) error("no_treatments", "treatment menu is empty");
  std::set<int> ids;
  for (const Treatment& t : spec.treatments) {
    if (t.id < 1) error("bad_treatment_id", "treatment ids must be positive");
    if (!ids.insert(t.id).second) error("duplicate_treatment_id", "treatment id " + std::to_string(t.id) + " repeated");
    if (!(t.cost > 0.0)) error("bad_cost", "treatment " + std::to_string(t.id) + ": cost must be positive");
    if (!(t.reduction > 0.0 && t.reduction < 1.0)) {
      error("bad_reduction", "treatment " + std::to_string(t.id) + ": reduction must lie in (0, 1)");
      continue;
    }
    if (!spec.floor_mode && spec.s_init > 0.0 && treat(spec.s_init, spec.growth, t.reduction) < spec.s_min) {
      warning("treatment_undershoots_floor",
              "treatment " + std::to_string(t.id) + " applied at s_init lands below s_min");
    }
  }

  if (spec.spacing_delta < 0) error("negative_spacing", "spacing delta must be nonnegative");
  if (spec.horizon >= 1 && spec.spacing_delta >= spec.horizon) {
    warning("spacing_covers_horizon", "spacing delta >= K: at most one treatment is possible");
  }

  int previous = 0;
  for (int period : spec.forced_periods) {
    if (period < 1 || period > spec.horizon) {
      error("forced_outside_horizon", "forced period " + std::to_string(period) + " outside 1..K");
      continue;
    }
    if (previous > 0 && period - previous <= spec.spacing_delta) {
      error("forced_spacing_conflict", "forced periods " + std::to_string(previous) + " and " +
                                           std::to_string(period) + " violate spacing delta " +
                                           std::to_string(spec.spacing_delta));
    }
    previous = period;
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

void require_valid(const ProblemSpec& spec) {
  const auto diagnostics = validate_spec(spec);
  if (!has_errors(diagnostics)) return;
  std::ostringstream msg;
  msg << "invalid problem spec:";
  for (const Diagnostic& d : diagnostics) {
    if (d.severity == Severity::kError) msg << "\n  [" << d.code << "] " << d.message;
  }
  throw Error(ErrorKind::kInvalidSpec, msg.str());
}

std::vector<double> action_shifts(const ProblemSpec& spec) {
  std::vector<double> shifts;
  shifts.reserve(spec.treatments.size() + 1);
  shifts.push_back(spec.growth.log_alpha());
  for (const Treatment& t : spec.treatments) shifts.push_back(std::log1p(-t.reduction) + spec.growth.log_alpha());
  return shifts;
}

double schedule_cost(const ProblemSpec& spec, const Schedule& schedule) {
  double total = 0.0;
  for (int choice : schedule.choice) {
    if (choice != Schedule::kNoTreatment) total += spec.treatments.at(static_cast<std::size_t>(choice - 1)).cost;
  }
  return total;
}

}  // namespace chemosched
