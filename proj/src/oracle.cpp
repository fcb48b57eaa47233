#include "chemosched/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace chemosched {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Depth-first enumeration over all (n+1)^K decision sequences.  A branch is
// abandoned as soon as it is infeasible: every completion of an infeasible
// prefix is infeasible too.
class Enumerator {
 public:
  Enumerator(const ProblemSpec& spec, const Objective& objective)
      : spec_(spec),
        objective_(objective),
        beta_(spec.growth.beta()),
        log_floor_(std::log(spec.s_min)),
        lo_(std::log(spec.s_min) - kLogTolerance),
        hi_(std::log(spec.s_tol) + kLogTolerance),
        choice_(static_cast<std::size_t>(spec.horizon), Schedule::kNoTreatment) {
    shifts_.push_back(spec.growth.log_alpha());
    for (const Treatment& t : spec.treatments) shifts_.push_back(std::log(1.0 - t.reduction) + spec.growth.log_alpha());
  }

  void run() {
    const double ls0 = std::log(spec_.s_init);
    visit(1, ls0, ls0, 0.0, 0);
  }

  bool found() const { return found_; }
  const std::vector<int>& best() const { return best_; }
  std::uint64_t optima() const { return optima_; }
  std::uint64_t leaves() const { return leaves_; }

 private:
  void visit(int period, double ls, double ls_max, double cost, int last_treated) {
    if (period > spec_.horizon) {
      ++leaves_;
      record(ls_max, cost);
      return;
    }
    const bool checked = period < spec_.horizon || spec_.include_terminal;
    for (int action = 0; action < static_cast<int>(shifts_.size()); ++action) {
      if (action == Schedule::kNoTreatment) {
        if (spec_.forced_periods.contains(period)) continue;
      } else if (last_treated > 0 && period - last_treated <= spec_.spacing_delta) {
        continue;
      }
      const double next_cost =
          cost + (action == Schedule::kNoTreatment ? 0.0 : spec_.treatments[static_cast<std::size_t>(action - 1)].cost);
      if (objective_.kind == ObjectiveKind::kMinMaxSize && next_cost > objective_.budget + kCostTolerance) continue;

      double next = shifts_[static_cast<std::size_t>(action)] + beta_ * ls;
      if (spec_.floor_mode) next = std::max(next, log_floor_);
      if (checked && (next < lo_ || next > hi_)) continue;
      choice_[static_cast<std::size_t>(period - 1)] = action;
      visit(period + 1, next, checked ? std::max(ls_max, next) : ls_max, next_cost,
            action == Schedule::kNoTreatment ? last_treated : period);
    }
    choice_[static_cast<std::size_t>(period - 1)] = Schedule::kNoTreatment;
  }

  void record(double ls_max, double cost) {
    const double value = objective_.kind == ObjectiveKind::kMinCost ? cost : ls_max;
    const double slack = objective_.kind == ObjectiveKind::kMinCost ? kCostTolerance : 1e-12;
    if (!found_ || value < best_value_ - slack) {
      found_ = true;
      best_value_ = value;
      best_cost_ = cost;
      best_ = choice_;
      optima_ = 1;
    } else if (value <= best_value_ + slack) {
      ++optima_;
      if (cost < best_cost_ - kCostTolerance) {
        best_cost_ = cost;
        best_ = choice_;
      }
    }
  }

  const ProblemSpec& spec_;
  Objective objective_;
  double beta_;
  double log_floor_;
  double lo_;
  double hi_;
  std::vector<double> shifts_;
  std::vector<int> choice_;

  bool found_ = false;
  double best_value_ = 0.0;
  double best_cost_ = 0.0;
  std::vector<int> best_;
  std::uint64_t optima_ = 0;
  std::uint64_t leaves_ = 0;
};

std::uint64_t schedule_space(const ProblemSpec& spec) {
  const std::uint64_t base = spec.treatments.size() + 1;
  std::uint64_t total = 1;
  for (int k = 0; k < spec.horizon; ++k) {
    if (total > kBruteForceLimit / base) return kBruteForceLimit + 1;
    total *= base;
  }
  return total;
}

// Reachable log sizes are merged when they agree to 12 significant digits.
double state_key(double ls) {
  if (ls == 0.0) return 0.0;
  const double e = std::floor(std::log10(std::abs(ls)));
  const double scale = std::pow(10.0, 11.0 - e);
  return std::nearbyint(ls * scale) / scale;
}

}  // namespace

SolveReport brute_force(const ProblemSpec& spec, const Objective& objective) {
  const auto start = std::chrono::steady_clock::now();
  require_valid(spec);
  if (schedule_space(spec) > kBruteForceLimit) {
    throw Error(ErrorKind::kSizeGuard, "brute force: (treatments + 1)^K exceeds 2^24");
  }
  if (objective.kind == ObjectiveKind::kMinMaxSize) Objective::min_max_size(objective.budget);

  Enumerator enumerator(spec, objective);
  enumerator.run();

  SolveReport report;
  report.objective = objective;
  report.labels_explored = enumerator.leaves();
  if (!enumerator.found()) {
    report.status = SolveStatus::kInfeasible;
    report.optimum_count = 0;
    report.wall_seconds = seconds_since(start);
    return report;
  }
  report.status = SolveStatus::kOptimal;
  report.schedule.choice = enumerator.best();
  report.optimum_count = enumerator.optima();
  finalize_report(spec, report);
  report.wall_seconds = seconds_since(start);
  return report;
}

BellmanResult bellman_solve(const ProblemSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  require_valid(spec);
  if (spec.treatments.size() != 1 || spec.spacing_delta != 0) {
    throw Error(ErrorKind::kUnsupported, "bellman_solve needs a single treatment and spacing delta 0");
  }
  const int K = spec.horizon;
  const double beta = spec.growth.beta();
  const double grow_shift = spec.growth.log_alpha();
  const double treat_shift = std::log(1.0 - spec.treatments[0].reduction) + spec.growth.log_alpha();
  const double price = spec.treatments[0].cost;
  const double log_floor = std::log(spec.s_min);
  const double lo = log_floor - kLogTolerance;
  const double hi = std::log(spec.s_tol) + kLogTolerance;

  auto step = [&](double ls, bool treated) {
    double next = (treated ? treat_shift : grow_shift) + beta * ls;
    return spec.floor_mode ? std::max(next, log_floor) : next;
  };
  auto admissible = [&](int period, double next) {
    const bool checked = period < K || spec.include_terminal;
    return !checked || (next >= lo && next <= hi);
  };

  // Forward reachability: states[k] are the band-feasible log sizes at the
  // start of period k+1, keyed by their rounded value.
  std::vector<std::map<double, double>> states(static_cast<std::size_t>(K) + 1);
  states[0].emplace(state_key(std::log(spec.s_init)), std::log(spec.s_init));
  std::size_t total = 1;
  for (int period = 1; period <= K; ++period) {
    auto& next_states = states[static_cast<std::size_t>(period)];
    for (const auto& [key, ls] : states[static_cast<std::size_t>(period - 1)]) {
      for (bool treated : {false, true}) {
        if (!treated && spec.forced_periods.contains(period)) continue;
        const double next = step(ls, treated);
        if (!admissible(period, next)) continue;
        if (next_states.emplace(state_key(next), next).second) ++total;
      }
    }
    if (total > kBellmanStateLimit) {
      throw Error(ErrorKind::kSizeGuard, "bellman_solve: reachable state set exceeds 2^22");
    }
  }

  // Backward recursion C_k[S] = min{C_{k+1}[f(S)], p + C_{k+1}[g(S)]}, with
  // infeasible branches at +inf.
  std::vector<std::map<double, double>> value(static_cast<std::size_t>(K) + 1);
  for (const auto& [key, ls] : states[static_cast<std::size_t>(K)]) value[static_cast<std::size_t>(K)][key] = 0.0;
  for (int period = K; period >= 1; --period) {
    const auto& later = value[static_cast<std::size_t>(period)];
    auto& here = value[static_cast<std::size_t>(period - 1)];
    for (const auto& [key, ls] : states[static_cast<std::size_t>(period - 1)]) {
      double best = kUnreachable;
      for (bool treated : {false, true}) {
        if (!treated && spec.forced_periods.contains(period)) continue;
        const double next = step(ls, treated);
        if (!admissible(period, next)) continue;
        const auto it = later.find(state_key(next));
        if (it == later.end()) continue;
        best = std::min(best, (treated ? price : 0.0) + it->second);
      }
      here[key] = best;
    }
  }

  BellmanResult result;
  result.table.periods.resize(static_cast<std::size_t>(K));
  for (int period = 1; period <= K; ++period) {
    auto& row = result.table.periods[static_cast<std::size_t>(period - 1)];
    for (const auto& [key, ls] : states[static_cast<std::size_t>(period - 1)]) {
      row.push_back({ls, value[static_cast<std::size_t>(period - 1)].at(key)});
    }
    std::sort(row.begin(), row.end(), [](const ValueEntry& a, const ValueEntry& b) { return a.ls < b.ls; });
  }

  SolveReport& report = result.report;
  report.objective = Objective::min_cost();
  report.labels_explored = total;
  const double optimum = value[0].begin()->second;
  if (optimum == kUnreachable) {
    report.status = SolveStatus::kInfeasible;
    report.wall_seconds = seconds_since(start);
    return result;
  }

  // Forward reconstruction following the recursion's argmin (untreated first).
  report.schedule = Schedule::untreated(K);
  double ls = std::log(spec.s_init);
  double remaining = optimum;
  for (int period = 1; period <= K; ++period) {
    const auto& later = value[static_cast<std::size_t>(period)];
    for (bool treated : {false, true}) {
      if (!treated && spec.forced_periods.contains(period)) continue;
      const double next = step(ls, treated);
      if (!admissible(period, next)) continue;
      const auto it = later.find(state_key(next));
      if (it == later.end()) continue;
      const double via = (treated ? price : 0.0) + it->second;
      if (std::abs(via - remaining) <= kCostTolerance) {
        report.schedule.choice[static_cast<std::size_t>(period - 1)] = treated ? 1 : Schedule::kNoTreatment;
        remaining = it->second;
        ls = next;
        break;
      }
    }
  }
  report.status = SolveStatus::kOptimal;
  finalize_report(spec, report);
  report.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace chemosched
