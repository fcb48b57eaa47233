#include <cmath>
#include <random>

#include "chemosched/oracle.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace chemosched;
using chemosched::testing::table1;

TEST_SUITE("oracle") {
  TEST_CASE("brute force on a five-period hand instance") {
    ProblemSpec spec = table1();
    spec.horizon = 5;
    spec.s_init = 400.0;
    // 400 must be treated at once (600 > 500); one more dose is needed before
    // the size passes 333.33 again.
    const SolveReport r = brute_force(spec, Objective::min_cost());
    REQUIRE(r.status == SolveStatus::kOptimal);
    CHECK(r.cost == 20.0);
    CHECK(r.schedule.treated(1));
    CHECK(r.optimum_count.value() >= 2);
    CHECK(simulate(spec, r.schedule).feasibility.feasible());
  }

  TEST_CASE("infeasible instance") {
    ProblemSpec spec = table1();
    // Even dosing every period grows 1.4x: 50 * 1.4^7 > 500.
    spec.horizon = 8;
    spec.growth = GrowthLaw(2.0, 1.0);
    spec.treatments[0].reduction = 0.3;
    const SolveReport r = brute_force(spec, Objective::min_cost());
    CHECK(r.status == SolveStatus::kInfeasible);
    CHECK(r.optimum_count.value() == 0);
  }

  TEST_CASE("size guard") {
    ProblemSpec spec = table1();
    spec.horizon = 25;
    try {
      brute_force(spec, Objective::min_cost());
      FAIL("expected size guard");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kSizeGuard);
    }
  }

  TEST_CASE("bellman recursion matches brute force") {
    std::mt19937_64 rng(31);
    RandomInstanceOptions options;
    options.max_treatments = 1;
    options.deltas = {0};
    options.allow_floor_mode = true;
    options.allow_forced = true;
    options.randomize_terminal = true;
    for (int trial = 0; trial < 120; ++trial) {
      const ProblemSpec spec = random_instance(rng, options);
      const SolveReport exact = brute_force(spec, Objective::min_cost());
      const BellmanResult b = bellman_solve(spec);
      REQUIRE(b.report.status == exact.status);
      if (exact.status != SolveStatus::kOptimal) continue;
      CHECK(b.report.cost == exact.cost);
      CHECK(simulate(spec, b.report.schedule).feasibility.feasible());
      REQUIRE(b.table.periods.size() == static_cast<std::size_t>(spec.horizon));
      REQUIRE(b.table.periods.front().size() == 1);
      CHECK(b.table.periods.front().front().value == exact.cost);
    }
  }

  TEST_CASE("bellman value table on the exponential reference") {
    const BellmanResult b = bellman_solve(table1());
    CHECK(b.report.cost == 210.0);
    // Cost-to-go never increases with time remaining shrinking along the
    // optimal path.
    double ls = std::log(50.0);
    double previous = kUnreachable;
    for (int k = 1; k <= 52; ++k) {
      const auto& row = b.table.periods[static_cast<std::size_t>(k - 1)];
      double value = kUnreachable;
      for (const ValueEntry& e : row) {
        if (std::abs(e.ls - ls) < 1e-9) value = e.value;
      }
      REQUIRE(value != kUnreachable);
      CHECK(value <= previous);
      previous = value;
      ls = b.report.trajectory.log_sizes[static_cast<std::size_t>(k)];
    }
  }

  TEST_CASE("bellman refuses menus and spacing") {
    for (Program p : {Program::kP2, Program::kP3}) {
      try {
        bellman_solve(table1(p));
        FAIL("expected unsupported");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::kUnsupported);
      }
    }
  }

  TEST_CASE("min-max brute force respects the budget") {
    ProblemSpec spec = table1();
    spec.horizon = 10;
    const SolveReport cheap = brute_force(spec, Objective::min_cost());
    const SolveReport tight = brute_force(spec, Objective::min_max_size(cheap.cost));
    const SolveReport loose = brute_force(spec, Objective::min_max_size(cheap.cost + 30));
    CHECK(tight.cost <= cheap.cost);
    CHECK(loose.max_size <= tight.max_size);
    CHECK(brute_force(spec, Objective::min_max_size(cheap.cost - 1)).status == SolveStatus::kInfeasible);
  }
}
