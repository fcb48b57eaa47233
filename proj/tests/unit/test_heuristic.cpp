#include <cmath>
#include <random>

#include "chemosched/heuristic.hpp"
#include "chemosched/oracle.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace chemosched;
using chemosched::testing::table1;
using chemosched::testing::table3;

namespace {

// Bisection on the untreated step: the size that grows exactly to s_tol.
double threshold_by_bisection(const ProblemSpec& spec) {
  double lo = 1e-6;
  double hi = spec.s_tol;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (grow(mid, spec.growth) < spec.s_tol ? lo : hi) = mid;
  }
  return lo;
}

ErrorKind kind_of(const ProblemSpec& spec) {
  try {
    heuristic_schedule(spec);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

}  // namespace

TEST_SUITE("heuristic") {
  TEST_CASE("threshold solves f(S) = S_Tol") {
    CHECK(threshold(table1()) == doctest::Approx(500.0 / 1.5).epsilon(1e-12));
    CHECK(threshold(table3()) == doctest::Approx(threshold_by_bisection(table3())).epsilon(1e-10));
    CHECK(threshold(table3()) == doctest::Approx(357.755).epsilon(1e-5));
  }

  TEST_CASE("reference instances") {
    const HeuristicResult exp = heuristic_schedule(table1());
    CHECK(exp.cost == 210.0);
    CHECK(exp.optimality_certified);
    const HeuristicResult gom = heuristic_schedule(table3());
    CHECK(gom.cost == 200.0);
    CHECK(gom.optimality_certified);
    // Treats exactly where the size exceeds the threshold.
    for (int k = 1; k <= 52; ++k) {
      CHECK(gom.schedule.treated(k) == (gom.trajectory.sizes[static_cast<std::size_t>(k - 1)] > gom.threshold));
    }
  }

  TEST_CASE("without the terminal index the last period is never treated") {
    ProblemSpec spec = table1();
    spec.include_terminal = false;
    const HeuristicResult r = heuristic_schedule(spec);
    CHECK_FALSE(r.schedule.treated(52));
  }

  TEST_CASE("unsupported shapes") {
    CHECK(kind_of(table1(Program::kP2)) == ErrorKind::kUnsupported);
    CHECK(kind_of(table1(Program::kP3)) == ErrorKind::kUnsupported);
    ProblemSpec forced = table1();
    forced.forced_periods = {3};
    CHECK(kind_of(forced) == ErrorKind::kUnsupported);
  }

  TEST_CASE("infeasible instance names the period") {
    ProblemSpec spec = table1();
    spec.growth = GrowthLaw(2.0, 1.0);
    spec.treatments[0].reduction = 0.3;  // treated growth 1.4 per period
    CHECK(kind_of(spec) == ErrorKind::kInfeasibleInstance);
    try {
      heuristic_schedule(spec);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("period") != std::string::npos);
    }
  }

  TEST_CASE("commutation condition") {
    CHECK(commutation_holds_raw(1.5, 1.0, 0.6, 10.0, 500.0));
    CHECK(commutation_holds_raw(3.68, 0.835, 0.6, 60.0, 500.0));
    CHECK_FALSE(commutation_holds_raw(0.5, 1.2, 0.6, 10.0, 500.0));
    CHECK(commutation_holds(table1(Program::kP2)) == std::vector<bool>{true, true});
  }

  TEST_CASE("property: certified heuristic matches brute force") {
    std::mt19937_64 rng(21);
    RandomInstanceOptions options;
    options.max_treatments = 1;
    options.deltas = {0};
    options.randomize_terminal = true;
    int compared = 0;
    for (int trial = 0; trial < 150; ++trial) {
      const ProblemSpec spec = random_instance(rng, options);
      if (!commutation_holds(spec).front()) continue;
      HeuristicResult h;
      try {
        h = heuristic_schedule(spec);
      } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::kInfeasibleInstance);
        continue;
      }
      const SolveReport exact = brute_force(spec, Objective::min_cost());
      REQUIRE(exact.status == SolveStatus::kOptimal);
      CHECK(h.cost == exact.cost);
      ++compared;
    }
    CHECK(compared > 30);
  }
}
