#include "chemosched/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>
#include <tuple>

#include "chemosched/kernels.hpp"

namespace chemosched {

bool dominates(const Label& a, const Label& b, bool tracking_max) {
  if (a.period != b.period) {
    throw Error(ErrorKind::kInternal, "dominance check across periods " + std::to_string(a.period) + " and " +
                                          std::to_string(b.period));
  }
  const double a_max = tracking_max ? a.ls_max : 0.0;
  const double b_max = tracking_max ? b.ls_max : 0.0;
  const double a_cd = a.cooldown;
  const double b_cd = b.cooldown;
  const double* cost = &a.cost;
  const double* ls = &a.ls;
  const kernels::LabelColumns kept{{cost, 1}, {ls, 1}, {&a_max, 1}, {&a_cd, 1}};
  return kernels::scalar::find_dominator(kept, {b.cost, b.ls, b_max, b_cd}, {kCostTolerance, kLogTolerance}) == 0;
}

namespace {

// Rounds to 12 significant digits; states whose keys match are merged.
struct Key {
  int exponent = 0;
  double mantissa = 0.0;

  static Key of(double x) {
    if (x == 0.0 || !std::isfinite(x)) return {0, x};
    const int e = static_cast<int>(std::floor(std::log10(std::abs(x))));
    return {e, std::nearbyint(x * std::pow(10.0, 11 - e))};
  }
  auto operator<=>(const Key&) const = default;
};

struct Candidate {
  double cost;
  double ls;
  double ls_max;
  int cooldown;
  int parent;  // index into the previous frontier
  int action;
  Key cost_key;
  Key ls_key;
  Key max_key;
};

struct Node {
  int parent;
  int action;
};

struct Frontier {
  std::vector<double> cost;
  std::vector<double> ls;
  std::vector<double> ls_max;
  std::vector<double> cooldown;
  std::vector<int> rank;  // larger is preferred among equal-objective labels

  std::size_t size() const { return cost.size(); }
  void clear() {
    cost.clear();
    ls.clear();
    ls_max.clear();
    cooldown.clear();
    rank.clear();
  }
  void push(const Candidate& c) {
    cost.push_back(c.cost);
    ls.push_back(c.ls);
    ls_max.push_back(c.ls_max);
    cooldown.push_back(static_cast<double>(c.cooldown));
  }
  kernels::LabelColumns columns() const { return {cost, ls, ls_max, cooldown}; }
};

// Without floor mode a smaller log size is not always better: it can make a
// later dose drop the size below s_min.  FloorSafety gives, per period and
// number of doses still affordable, the smallest log size from which no
// admissible continuation reaches the floor.  Below it a label may only be
// dominated by one with (nearly) the same log size.
class FloorSafety {
 public:
  FloorSafety(const ProblemSpec& spec, const std::vector<double>& shifts) : horizon_(spec.horizon) {
    const int tracked = spec.include_terminal ? spec.horizon + 1 : spec.horizon;
    const int span = std::max(tracked - 2, 0);  // longest look-ahead, from period 1
    const double inf = std::numeric_limits<double>::infinity();
    table_.assign(static_cast<std::size_t>(span + 1) * static_cast<std::size_t>(horizon_ + 1), -inf);
    tracked_ = tracked;
    if (spec.floor_mode) return;

    const double beta = spec.growth.beta();
    const double log_floor = std::log(spec.s_min);
    const double grow = shifts[0];
    double strongest = 0.0;  // most negative log(1 - RF)
    for (std::size_t i = 1; i < shifts.size(); ++i) strongest = std::min(strongest, shifts[i] - grow);
    const int stride = spec.spacing_delta + 1;

    // Lowest log size s steps ahead of x is beta^s x + growth(s) + doses(s, r),
    // with the r doses as late as spacing allows.
    double beta_s = 1.0;
    double growth = 0.0;
    for (int steps = 1; steps <= span; ++steps) {
      growth = grow + beta * growth;
      beta_s *= beta;
      double doses = 0.0;
      double weight = 1.0;
      for (int r = 0; r <= horizon_; ++r) {
        if (r > 0 && (r - 1) * stride < steps) {
          doses += strongest * weight;
          for (int i = 0; i < stride; ++i) weight *= beta;
        }
        const double need = log_floor - growth - doses;
        const double x = beta_s > 0.0 ? need / beta_s : (need > 0.0 ? inf : -inf);
        double& cell = at(steps, r);
        cell = std::max(x, at(steps - 1, r));
      }
    }
  }

  // Threshold for a label of `period` that can still afford `doses` doses.
  double threshold(int period, int doses) const {
    const int steps = std::max(tracked_ - (period + 1), 0);
    return at(steps, std::clamp(doses, 0, horizon_));
  }

 private:
  double& at(int steps, int r) {
    return table_[static_cast<std::size_t>(steps) * static_cast<std::size_t>(horizon_ + 1) +
                  static_cast<std::size_t>(r)];
  }
  double at(int steps, int r) const {
    return table_[static_cast<std::size_t>(steps) * static_cast<std::size_t>(horizon_ + 1) +
                  static_cast<std::size_t>(r)];
  }

  int horizon_;
  int tracked_ = 0;
  std::vector<double> table_;
};

// Lower bound on the cost still to be paid from a label.  It solves, on a
// grid of log sizes, the relaxation without the floor (unless clamped),
// spacing or forced doses.  That relaxation's cost-to-go is nondecreasing in
// the log size, so reading the grid point at or below a label's log size
// never overestimates.
class CostToGo {
 public:
  static constexpr int kPoints = 1 << 13;
  static constexpr double kBelowFloor = 3.0;  // grid reach under log s_min

  CostToGo(const ProblemSpec& spec, const std::vector<double>& shifts, const std::vector<double>& costs)
      : horizon_(spec.horizon) {
    const double inf = std::numeric_limits<double>::infinity();
    const double log_floor = std::log(spec.s_min);
    const double hi = std::log(spec.s_tol) + kLogTolerance;
    lo_ = log_floor - kBelowFloor;
    step_ = (hi - lo_) / (kPoints - 1);
    values_.assign(static_cast<std::size_t>(horizon_) * kPoints, 0.0);
    const double beta = spec.growth.beta();
    for (int period = horizon_ - 1; period >= 1; --period) {
      const bool checked = period + 1 < spec.horizon || spec.include_terminal;
      for (int i = 0; i < kPoints; ++i) {
        const double x = lo_ + step_ * i;
        double best = inf;
        for (std::size_t a = 0; a < shifts.size(); ++a) {
          double y = shifts[a] + beta * x;
          if (spec.floor_mode) y = std::max(y, log_floor);
          if (checked && y > hi) continue;
          const double c = a == 0 ? 0.0 : costs[a];
          best = std::min(best, c + lookup(period + 1, y));
        }
        cell(period, i) = best;
      }
    }
  }

  // Bound for a label of `period` (holding LS at index period + 1).
  double lookup(int period, double ls) const {
    if (period >= horizon_) return 0.0;
    const double pos = std::floor((ls - lo_) / step_);
    if (!(pos >= 0.0)) return 0.0;
    const int i = pos >= kPoints - 1 ? kPoints - 1 : static_cast<int>(pos);
    return values_[static_cast<std::size_t>(period - 1) * kPoints + static_cast<std::size_t>(i)];
  }

 private:
  double& cell(int period, int i) {
    return values_[static_cast<std::size_t>(period - 1) * kPoints + static_cast<std::size_t>(i)];
  }

  int horizon_;
  double lo_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
};

// Kept labels of one period grouped by log size, so that a dominance query
// only scans the buckets its admissible log-size window overlaps.
class BucketIndex {
 public:
  static constexpr int kBuckets = 512;

  BucketIndex(double lo, double hi) : lo_(lo), width_((hi - lo) / kBuckets), buckets_(kBuckets) {}

  void clear() {
    for (Frontier& b : buckets_) b.clear();
  }

  void add(const Candidate& c) { buckets_[static_cast<std::size_t>(index(c.ls))].push(c); }

  bool dominated(const kernels::LabelProbe& probe, const kernels::Tolerances& tol) const {
    const int first = index(probe.ls_min);
    const int last = index(probe.ls + tol.ls);
    for (int b = first; b <= last; ++b) {
      const Frontier& bucket = buckets_[static_cast<std::size_t>(b)];
      if (bucket.size() > 0 && kernels::find_dominator(bucket.columns(), probe, tol) >= 0) return true;
    }
    return false;
  }

 private:
  int index(double ls) const {
    const double pos = std::floor((ls - lo_) / width_);
    if (!(pos > 0.0)) return 0;
    return pos >= kBuckets - 1 ? kBuckets - 1 : static_cast<int>(pos);
  }

  double lo_;
  double width_;
  std::vector<Frontier> buckets_;
};

class LabelSweep {
 public:
  // cost_cap bounds the cost of any schedule worth keeping (the budget, or a
  // known feasible cost for cost minimization).  floor_safe enables the sound
  // dominance rule above; without it dominance ignores the floor.
  LabelSweep(const ProblemSpec& spec, const Objective& objective, const SolveOptions& options, double cost_cap,
             bool floor_safe, double max_cap = std::numeric_limits<double>::infinity())
      : spec_(spec),
        objective_(objective),
        options_(options),
        shifts_(action_shifts(spec)),
        safety_(spec, shifts_),
        cost_cap_(cost_cap),
        max_cap_(max_cap),
        floor_safe_(floor_safe),
        index_(std::log(spec.s_min) - 1.0, std::log(spec.s_tol) + 1.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    costs_.push_back(nan);
    for (const Treatment& t : spec.treatments) costs_.push_back(t.cost);
    if (std::isfinite(cost_cap_)) to_go_.emplace(spec, shifts_, costs_);
    cheapest_ = std::numeric_limits<double>::infinity();
    for (const Treatment& t : spec.treatments) cheapest_ = std::min(cheapest_, t.cost);
  }

  SolveReport run() {
    const auto start = std::chrono::steady_clock::now();
    SolveReport report;
    report.objective = objective_;

    const bool tracking = objective_.tracks_max();
    const double ls0 = std::log(spec_.s_init);
    Frontier frontier;
    frontier.cost = {0.0};
    frontier.ls = {ls0};
    frontier.ls_max = {tracking ? ls0 : 0.0};
    frontier.cooldown = {0.0};
    frontier.rank = {0};
    arena_.assign(static_cast<std::size_t>(spec_.horizon), {});

    for (int period = 1; period <= spec_.horizon && frontier.size() > 0; ++period) {
      expand(period, frontier);
      select(period, frontier);
    }

    report.labels_explored = explored_;
    report.labels_pruned = pruned_;
    report.labels_merged = merged_;
    report.terminal_labels = frontier.size();
    if (frontier.size() == 0) {
      report.status = SolveStatus::kInfeasible;
      report.wall_seconds = elapsed(start);
      return report;
    }

    const std::size_t best = pick_terminal(frontier);
    report.status = SolveStatus::kOptimal;
    report.schedule = reconstruct(static_cast<int>(best));
    finalize_report(spec_, report);

    if (std::abs(report.cost - frontier.cost[best]) > kCostTolerance) {
      throw Error(ErrorKind::kInternal, "reconstructed schedule cost differs from its label");
    }
    if (tracking && std::abs(report.max_log_size - frontier.ls_max[best]) > kLogTolerance) {
      throw Error(ErrorKind::kInternal, "reconstructed schedule max size differs from its label");
    }
    report.wall_seconds = elapsed(start);
    return report;
  }

 private:
  static double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  // Generates every admissible successor of the frontier into candidates_.
  void expand(int period, const Frontier& frontier) {
    const bool tracking = objective_.tracks_max();
    const bool checked = period < spec_.horizon || spec_.include_terminal;
    const double log_floor = std::log(spec_.s_min);
    const double lo = checked ? log_floor - kLogTolerance : -std::numeric_limits<double>::infinity();
    const double hi = checked ? std::log(spec_.s_tol) + kLogTolerance : std::numeric_limits<double>::infinity();
    const bool forced = spec_.forced_periods.contains(period);
    const std::size_t n = frontier.size();

    next_ls_.resize(n);
    next_max_.resize(n);
    mask_.resize(n);
    candidates_.clear();

    for (int action = 0; action < static_cast<int>(shifts_.size()); ++action) {
      if (action == Schedule::kNoTreatment && forced) continue;
      kernels::advance(frontier.ls, spec_.growth.beta(), shifts_[static_cast<std::size_t>(action)], next_ls_);
      if (spec_.floor_mode) kernels::clamp_below(next_ls_, log_floor);
      if (kernels::band_mask(next_ls_, lo, hi, mask_) == 0) continue;
      if (tracking && checked) {
        kernels::running_max(frontier.ls_max, next_ls_, next_max_);
      } else {
        std::copy(frontier.ls_max.begin(), frontier.ls_max.end(), next_max_.begin());
      }

      for (std::size_t j = 0; j < n; ++j) {
        if (!mask_[j]) continue;
        const int cooldown = static_cast<int>(frontier.cooldown[j]);
        double cost = frontier.cost[j];
        int next_cooldown = std::max(cooldown - 1, 0);
        if (action != Schedule::kNoTreatment) {
          if (cooldown > 0) continue;
          cost += costs_[static_cast<std::size_t>(action)];
          if (cost > cost_cap_ + kCostTolerance) continue;
          next_cooldown = spec_.spacing_delta;
        }
        if (to_go_ && cost + to_go_->lookup(period, next_ls_[j]) > cost_cap_ + kCostTolerance) continue;
        if (next_max_[j] > max_cap_ + kLogTolerance) continue;
        candidates_.push_back({cost, next_ls_[j], next_max_[j], next_cooldown, static_cast<int>(j), action,
                               Key::of(cost), Key::of(next_ls_[j]), Key::of(next_max_[j])});
      }
    }
    explored_ += candidates_.size();
  }

  // Merges duplicate states, drops dominated labels and ranks the survivors.
  void select(int period, Frontier& frontier) {
    const std::vector<int> parent_rank = frontier.rank;

    // Equal-state groups become contiguous; within a group the preferred
    // decision sequence (later / higher treatment, then preferred parent)
    // comes first.
    std::sort(candidates_.begin(), candidates_.end(), [&](const Candidate& a, const Candidate& b) {
      const auto ka = std::tie(a.cost_key, a.ls_key, a.max_key, a.cooldown);
      const auto kb = std::tie(b.cost_key, b.ls_key, b.max_key, b.cooldown);
      if (ka != kb) return ka < kb;
      if (a.action != b.action) return a.action > b.action;
      return parent_rank[static_cast<std::size_t>(a.parent)] > parent_rank[static_cast<std::size_t>(b.parent)];
    });

    frontier.clear();
    index_.clear();
    kept_.clear();
    const kernels::Tolerances tol{kCostTolerance, kLogTolerance};
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      const Candidate& c = candidates_[i];
      if (i > 0) {
        const Candidate& prev = candidates_[i - 1];
        if (c.cost_key == prev.cost_key && c.ls_key == prev.ls_key && c.max_key == prev.max_key &&
            c.cooldown == prev.cooldown) {
          ++merged_;
          continue;
        }
      }
      if (options_.prune_dominated &&
          index_.dominated({c.cost, c.ls, c.ls_max, static_cast<double>(c.cooldown), lowest_dominator(period, c)},
                           tol)) {
        ++pruned_;
        continue;
      }
      frontier.push(c);
      if (options_.prune_dominated) index_.add(c);
      kept_.push_back(i);
      if (frontier.size() > options_.max_labels_per_period) {
        throw Error(ErrorKind::kSizeGuard, "label set exceeds " + std::to_string(options_.max_labels_per_period) +
                                               " entries in period " + std::to_string(period));
      }
    }

    // Rank by (action, parent rank): comparing two decision sequences from the
    // most recent period backwards.
    std::vector<std::size_t> order(kept_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const Candidate& a = candidates_[kept_[x]];
      const Candidate& b = candidates_[kept_[y]];
      if (a.action != b.action) return a.action < b.action;
      return parent_rank[static_cast<std::size_t>(a.parent)] < parent_rank[static_cast<std::size_t>(b.parent)];
    });
    frontier.rank.assign(kept_.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) frontier.rank[order[r]] = static_cast<int>(r);

    auto& nodes = arena_[static_cast<std::size_t>(period - 1)];
    nodes.clear();
    nodes.reserve(kept_.size());
    for (std::size_t idx : kept_) nodes.push_back({candidates_[idx].parent, candidates_[idx].action});
  }

  double lowest_dominator(int period, const Candidate& c) const {
    if (!floor_safe_) return -std::numeric_limits<double>::infinity();
    int doses = spec_.horizon;
    if (std::isfinite(cost_cap_)) {
      doses = static_cast<int>(std::floor((cost_cap_ - c.cost + kCostTolerance) / cheapest_));
    }
    return std::min(safety_.threshold(period, doses), c.ls - kLogTolerance);
  }

  std::size_t pick_terminal(const Frontier& frontier) const {
    const bool tracking = objective_.tracks_max();
    std::size_t best = 0;
    auto key = [&](std::size_t j) {
      const Key primary = tracking ? Key::of(frontier.ls_max[j]) : Key::of(frontier.cost[j]);
      const Key secondary = tracking ? Key::of(frontier.cost[j]) : Key{};
      return std::make_tuple(primary, secondary, -frontier.rank[j]);
    };
    for (std::size_t j = 1; j < frontier.size(); ++j) {
      if (key(j) < key(best)) best = j;
    }
    return best;
  }

  Schedule reconstruct(int terminal) const {
    Schedule schedule = Schedule::untreated(spec_.horizon);
    int node = terminal;
    for (int period = spec_.horizon; period >= 1; --period) {
      const Node& n = arena_[static_cast<std::size_t>(period - 1)][static_cast<std::size_t>(node)];
      schedule.choice[static_cast<std::size_t>(period - 1)] = n.action;
      node = n.parent;
    }
    return schedule;
  }

  const ProblemSpec& spec_;
  Objective objective_;
  SolveOptions options_;
  std::vector<double> shifts_;
  FloorSafety safety_;
  double cost_cap_;
  double max_cap_;
  bool floor_safe_;
  std::optional<CostToGo> to_go_;
  BucketIndex index_;
  double cheapest_;
  std::vector<double> costs_;

  std::vector<std::vector<Node>> arena_;
  std::vector<Candidate> candidates_;
  std::vector<std::size_t> kept_;
  std::vector<double> next_ls_;
  std::vector<double> next_max_;
  std::vector<std::uint8_t> mask_;
  std::uint64_t explored_ = 0;
  std::uint64_t pruned_ = 0;
  std::uint64_t merged_ = 0;
};

}  // namespace

SolveReport solve_spec(const ProblemSpec& spec, const Objective& objective, const SolveOptions& options) {
  require_valid(spec);
  const double inf = std::numeric_limits<double>::infinity();
  const bool tracking = objective.tracks_max();
  if (tracking) Objective::min_max_size(objective.budget);
  const double budget = tracking ? objective.budget : inf;
  if (!options.prune_dominated || spec.floor_mode) return LabelSweep(spec, objective, options, budget, true).run();
  // Floor-blind dominance is fast and still yields a feasible schedule.  Its
  // cost (or max size) bounds the exact pass, which limits the doses the
  // floor check must account for and prunes labels that cannot beat it.
  const SolveReport bound = LabelSweep(spec, objective, options, budget, false).run();
  if (bound.status != SolveStatus::kOptimal) {
    SolveReport exact = LabelSweep(spec, objective, options, budget, true).run();
    exact.labels_explored += bound.labels_explored;
    return exact;
  }
  const double cap = tracking ? budget : bound.cost;
  const double max_cap = tracking ? bound.max_log_size : inf;
  SolveReport exact = LabelSweep(spec, objective, options, cap, true, max_cap).run();
  exact.labels_explored += bound.labels_explored;
  exact.wall_seconds += bound.wall_seconds;
  return exact;
}

SolveReport solve(const ProblemSpec& spec, Program program, const Objective& objective, const SolveOptions& options) {
  check_program_fits(spec, program);
  return solve_spec(spec, objective, options);
}

std::vector<SweepEntry> sweep_budget(const ProblemSpec& spec, Program program, std::span<const double> budgets,
                                     unsigned threads) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) {
    throw Error(ErrorKind::kDomain, "sweep budgets must be sorted ascending");
  }
  check_program_fits(spec, program);
  require_valid(spec);
  for (double b : budgets) Objective::min_max_size(b);

  std::vector<SweepEntry> entries(budgets.size());
  std::vector<std::exception_ptr> failures(budgets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < budgets.size(); i = next++) {
      try {
        SweepEntry& e = entries[i];
        e.budget = budgets[i];
        e.report = solve(spec, program, Objective::min_max_size(budgets[i]));
        e.status = e.report.status;
        e.max_size = e.report.status == SolveStatus::kOptimal ? e.report.max_size : 0.0;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, budgets.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return entries;
}

}  // namespace chemosched
