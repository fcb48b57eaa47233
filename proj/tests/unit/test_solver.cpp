#include <cmath>
#include <random>

#include "chemosched/kernels.hpp"
#include "chemosched/oracle.hpp"
#include "chemosched/solver.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace chemosched;
using chemosched::testing::relative_close;
using chemosched::testing::table1;
using chemosched::testing::table3;

namespace {

void check_against_oracle(const ProblemSpec& spec, const Objective& objective) {
  const SolveReport ref = brute_force(spec, objective);
  const SolveReport got = solve_spec(spec, objective);
  REQUIRE(got.status == ref.status);
  if (ref.status != SolveStatus::kOptimal) return;
  if (objective.tracks_max()) {
    CHECK(relative_close(got.max_size, ref.max_size, 1e-9));
    CHECK(got.cost <= objective.budget + kCostTolerance);
  } else {
    CHECK(got.cost == ref.cost);
  }
  CHECK(simulate(spec, got.schedule).feasibility.feasible());
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("dominance") {
    Label a{3, 10.0, 5.0, 5.5, 0, -1, 0};
    Label b = a;
    CHECK_FALSE(dominates(a, b, true));  // equal labels: no strict component
    b.cost = 20.0;
    CHECK(dominates(a, b, true));
    CHECK_FALSE(dominates(b, a, true));
    b = a;
    b.ls_max = 6.0;
    CHECK(dominates(a, b, true));
    CHECK_FALSE(dominates(a, b, false));  // running max ignored when untracked
    b = a;
    b.cooldown = 1;
    CHECK(dominates(a, b, true));
    b = a;
    b.ls = 4.0;
    b.cost = 20.0;
    CHECK_FALSE(dominates(a, b, true));
    CHECK_FALSE(dominates(b, a, true));
    b = a;
    b.period = 4;
    CHECK_THROWS_AS(dominates(a, b, true), Error);
  }

  TEST_CASE("reference cells") {
    CHECK(solve(table1(), Program::kP1, Objective::min_cost()).cost == 210.0);
    CHECK(solve(table1(Program::kP2), Program::kP2, Objective::min_cost()).cost == 204.0);
    CHECK(solve(table3(), Program::kP1, Objective::min_cost()).cost == 200.0);
    const SolveReport pi = solve(table1(), Program::kP1, Objective::min_max_size(220));
    CHECK(std::abs(pi.max_size - 126.19) <= 0.01);
    CHECK(pi.max_size_index == 53);
  }

  TEST_CASE("wrong program for the spec") {
    try {
      solve(table1(Program::kP2), Program::kP1, Objective::min_cost());
      FAIL("expected wrong builder");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kWrongBuilder);
    }
    CHECK_THROWS_AS(solve(table1(), Program::kP3, Objective::min_cost()), Error);
  }

  TEST_CASE("report fields") {
    const SolveReport r = solve(table1(Program::kP2), Program::kP2, Objective::min_cost());
    CHECK(r.treatment_counts == std::vector<int>{10, 8});
    CHECK(r.objective_value == r.cost);
    REQUIRE(r.spacing.min_gap.has_value());
    CHECK(*r.spacing.min_gap <= *r.spacing.max_gap);
    CHECK(r.trajectory.sizes.size() == 53);
    CHECK(r.labels_explored > 0);
    CHECK(r.terminal_labels > 0);
    CHECK(spacing_stats(Schedule::from_periods(10, {1, 3, 7})).min_gap == 1);
    CHECK(spacing_stats(Schedule::from_periods(10, {1, 3, 7})).max_gap == 3);
    CHECK_FALSE(spacing_stats(Schedule::from_periods(10, {4})).min_gap.has_value());
  }

  TEST_CASE("deterministic and independent of pruning and kernel variant") {
    const ProblemSpec spec = table3(Program::kP2);
    const Objective obj = Objective::min_max_size(191);
    const SolveReport a = solve(spec, Program::kP2, obj);
    const SolveReport b = solve(spec, Program::kP2, obj);
    CHECK(a.schedule == b.schedule);

    ProblemSpec small = table1(Program::kP2);
    small.horizon = 12;
    SolveOptions no_prune;
    no_prune.prune_dominated = false;
    const SolveReport pruned = solve(small, Program::kP2, Objective::min_max_size(60));
    const SolveReport full = solve(small, Program::kP2, Objective::min_max_size(60), no_prune);
    CHECK(pruned.max_size == full.max_size);
    CHECK(full.labels_pruned == 0);

    if (kernels::available(kernels::Isa::kAvx2)) {
      const kernels::Isa before = kernels::active();
      kernels::select(kernels::Isa::kScalar);
      const SolveReport scalar = solve(spec, Program::kP2, obj);
      kernels::select(kernels::Isa::kAvx2);
      const SolveReport vector = solve(spec, Program::kP2, obj);
      kernels::select(before);
      CHECK(scalar.schedule == vector.schedule);
      CHECK(scalar.labels_explored == vector.labels_explored);
      CHECK(scalar.labels_pruned == vector.labels_pruned);
    }
  }

  TEST_CASE("forced periods are honoured") {
    ProblemSpec spec = table1();
    spec.forced_periods = {2, 40};
    const SolveReport r = solve(spec, Program::kP1, Objective::min_cost());
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(r.schedule.treated(2));
    CHECK(r.schedule.treated(40));
  }

  TEST_CASE("budget sweep is monotone and survives infeasible budgets") {
    const std::vector<double> budgets{0, 200, 210, 220, 230, 240};
    const auto entries = sweep_budget(table1(), Program::kP1, budgets, 2);
    REQUIRE(entries.size() == budgets.size());
    CHECK(entries[0].status == SolveStatus::kInfeasible);
    CHECK(entries[1].status == SolveStatus::kInfeasible);
    for (std::size_t i = 2; i < entries.size(); ++i) {
      REQUIRE(entries[i].status == SolveStatus::kOptimal);
      CHECK(entries[i].budget == budgets[i]);
      if (i > 2) CHECK(entries[i].max_size <= entries[i - 1].max_size);
    }
    const std::vector<double> unsorted{220, 210};
    CHECK_THROWS_AS(sweep_budget(table1(), Program::kP1, unsorted), Error);
  }

  TEST_CASE("property: solver equals brute force") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 120; ++trial) {
      const ProblemSpec spec = random_instance(rng);
      check_against_oracle(spec, Objective::min_cost());
      const SolveReport cheap = brute_force(spec, Objective::min_cost());
      if (cheap.status == SolveStatus::kOptimal) {
        check_against_oracle(spec, Objective::min_max_size(cheap.cost));
        check_against_oracle(spec, Objective::min_max_size(cheap.cost + 2 * spec.treatments[0].cost));
      }
    }
  }

  TEST_CASE("property: solver equals brute force with floor mode, forced periods and no terminal index") {
    std::mt19937_64 rng(42);
    RandomInstanceOptions options;
    options.allow_floor_mode = true;
    options.allow_forced = true;
    options.randomize_terminal = true;
    for (int trial = 0; trial < 120; ++trial) {
      ProblemSpec spec = random_instance(rng, options);
      if (has_errors(validate_spec(spec))) continue;
      check_against_oracle(spec, Objective::min_cost());
      const SolveReport cheap = brute_force(spec, Objective::min_cost());
      if (cheap.status == SolveStatus::kOptimal) {
        check_against_oracle(spec, Objective::min_max_size(cheap.cost + spec.treatments[0].cost));
      }
    }
  }

  TEST_CASE("property: pruning never changes the optimum") {
    std::mt19937_64 rng(44);
    RandomInstanceOptions options;
    options.max_horizon = 12;
    options.allow_floor_mode = true;
    options.randomize_terminal = true;
    SolveOptions keep_all;
    keep_all.prune_dominated = false;
    for (int trial = 0; trial < 80; ++trial) {
      ProblemSpec spec = random_instance(rng, options);
      if (trial % 2) spec.s_min = spec.s_init * 0.6;
      if (has_errors(validate_spec(spec))) continue;
      const SolveReport full = solve_spec(spec, Objective::min_cost(), keep_all);
      const SolveReport pruned = solve_spec(spec, Objective::min_cost());
      REQUIRE(pruned.status == full.status);
      if (full.status != SolveStatus::kOptimal) continue;
      CHECK(pruned.cost == full.cost);
      const Objective minmax = Objective::min_max_size(full.cost + spec.treatments.back().cost);
      CHECK(relative_close(solve_spec(spec, minmax).max_log_size, solve_spec(spec, minmax, keep_all).max_log_size,
                           1e-12));
    }
  }

  TEST_CASE("property: solver equals brute force under tight floors") {
    // Tight floors make treatment from small sizes infeasible; the solver
    // must not prune a smaller size in favour of a larger one there.
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 120; ++trial) {
      ProblemSpec spec = random_instance(rng);
      spec.s_min = spec.s_init * 0.7;
      if (has_errors(validate_spec(spec))) continue;
      check_against_oracle(spec, Objective::min_cost());
      const SolveReport cheap = brute_force(spec, Objective::min_cost());
      if (cheap.status == SolveStatus::kOptimal) {
        check_against_oracle(spec, Objective::min_max_size(cheap.cost + spec.treatments[0].cost));
      }
    }
  }
}
