#pragma once

// Domain types and tumor dynamics.
//
// Between two consecutive period starts the size follows the power-law
// recurrence S' = alpha * S^beta (exponential growth when beta == 1, Gompertz
// growth when 0 < beta < 1).  A dose applied at the start of a period scales
// the grown size by (1 - RF).  Taking logs turns the recurrence into
//
//   LS' = X * log(1 - RF) + log(alpha) + beta * LS
//
// which is linear in the log size and in the treatment indicator X.  The log
// form is the source of truth everywhere in this library.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "chemosched/error.hpp"

namespace chemosched {

// Absolute tolerance applied to log sizes when checking the size band.
inline constexpr double kLogTolerance = 1e-9;

class GrowthLaw {
 public:
  // Throws kInvalidGrowth unless alpha > 0, 0 < beta <= 1, and alpha > 1
  // whenever beta == 1.
  GrowthLaw(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double log_alpha() const noexcept { return log_alpha_; }

  // Untreated fixed point alpha^(1/(1-beta)); +inf for exponential growth.
  double fixed_point() const noexcept;

  bool operator==(const GrowthLaw&) const = default;

 private:
  double alpha_;
  double beta_;
  double log_alpha_;
};

struct ExponentialParams {
  double phi0 = 0.0;
  double b = 0.0;
};

struct GompertzParams {
  double phi0 = 0.0;
  double a = 0.0;
  double b = 0.0;
};

// alpha = ln(b), beta = 1.
GrowthLaw exponential_coefficients(const ExponentialParams& params);

// alpha = (phi0 * e^(a/b))^(1 - e^-b), beta = e^-b.
GrowthLaw gompertz_coefficients(const GompertzParams& params);

double grow(double size, const GrowthLaw& law);
double treat(double size, const GrowthLaw& law, double reduction);

struct Treatment {
  int id = 1;
  double cost = 0.0;
  double reduction = 0.0;

  bool operator==(const Treatment&) const = default;
};

struct ProblemSpec {
  int horizon = 0;  // K; periods are numbered 1..K
  double s_init = 0.0;
  double s_min = 0.0;
  double s_tol = 0.0;
  GrowthLaw growth{2.0, 1.0};
  std::vector<Treatment> treatments;
  int spacing_delta = 0;
  std::set<int> forced_periods;
  bool floor_mode = false;
  bool include_terminal = true;

  std::size_t treatment_count() const noexcept { return treatments.size(); }

  // Number of sizes subject to the band and the max-size objective: K or K+1.
  int tracked_indices() const noexcept { return include_terminal ? horizon + 1 : horizon; }

  bool operator==(const ProblemSpec&) const = default;
};

// choice[k-1] is 0 for no treatment in period k, otherwise the 1-based
// position of the administered treatment in ProblemSpec::treatments.
struct Schedule {
  static constexpr int kNoTreatment = 0;

  std::vector<int> choice;

  static Schedule untreated(int horizon);
  static Schedule from_periods(int horizon, const std::vector<int>& periods, int treatment = 1);

  int horizon() const noexcept { return static_cast<int>(choice.size()); }
  bool treated(int period) const { return choice.at(static_cast<std::size_t>(period - 1)) != kNoTreatment; }
  int treatment_at(int period) const { return choice.at(static_cast<std::size_t>(period - 1)); }
  std::vector<int> treated_periods() const;
  int count(int treatment) const;

  bool operator==(const Schedule&) const = default;
};

// Sizes are indexed 1..K+1; element 0 of each vector is S_1.
struct Trajectory {
  std::vector<double> sizes;
  std::vector<double> log_sizes;
  std::vector<bool> treated;
};

enum class Bound { kLower, kUpper };

struct BandViolation {
  int index = 0;
  double size = 0.0;
  Bound bound = Bound::kUpper;
};

enum class ScheduleFault { kSpacing, kForcedMissing, kUnknownTreatment };

struct ScheduleViolation {
  int period = 0;
  ScheduleFault fault = ScheduleFault::kSpacing;
};

struct FeasibilityReport {
  std::vector<BandViolation> band;
  std::vector<ScheduleViolation> schedule;

  bool feasible() const noexcept { return band.empty() && schedule.empty(); }
};

struct Simulation {
  Trajectory trajectory;
  FeasibilityReport feasibility;
};

// Log sizes LS_1..LS_{K+1} via the log-linear recurrence (floor clamp applied
// in floor mode).
std::vector<double> log_recurrence(const ProblemSpec& spec, const Schedule& schedule);

// Sizes S_1..S_{K+1} via the multiplicative recurrence, independently of the
// log form.
std::vector<double> multiplicative_recurrence(const ProblemSpec& spec, const Schedule& schedule);

// Runs both recurrences, checks that they agree to 1e-9 relative (kInternal
// otherwise) and reports every band, spacing and forced-period violation.
// With enforce_band off, band violations are not reported.  A schedule naming
// an unknown treatment gets only schedule faults and an empty trajectory.
// Throws kDomain if the schedule length differs from K.
Simulation simulate(const ProblemSpec& spec, const Schedule& schedule, bool enforce_band = true);

bool within_band(double log_size, const ProblemSpec& spec);

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string code;
  std::string message;
};

std::vector<Diagnostic> validate_spec(const ProblemSpec& spec);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

// Throws kInvalidSpec listing every error diagnostic.
void require_valid(const ProblemSpec& spec);

// Additive log-space shift of each action: element 0 is log(alpha) (no
// treatment), element i is log(1 - RF_i) + log(alpha).
std::vector<double> action_shifts(const ProblemSpec& spec);

// Sum of treatment costs of a schedule.
double schedule_cost(const ProblemSpec& spec, const Schedule& schedule);

}  // namespace chemosched
