#include <cmath>
#include <random>

#include "chemosched/model.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace chemosched;
using chemosched::testing::relative_close;
using chemosched::testing::table1;
using chemosched::testing::table3;

namespace {

// Continuous Gompertz curve and its inverse by bisection.
double gompertz_curve(double t, double phi0, double a, double b) { return phi0 * std::exp(a / b * (1 - std::exp(-b * t))); }

double gompertz_time_of(double size, double phi0, double a, double b) {
  double lo = -50.0;
  double hi = 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gompertz_curve(mid, phi0, a, b) < size ? lo : hi) = mid;
  }
  return lo;
}

ProblemSpec hand_spec(int horizon) {
  ProblemSpec spec = table1();
  spec.horizon = horizon;
  return spec;
}

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code, Severity severity) {
  for (const Diagnostic& d : ds) {
    if (d.code == code && d.severity == severity) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("growth law invariants") {
    CHECK_NOTHROW(GrowthLaw(1.5, 1.0));
    CHECK_NOTHROW(GrowthLaw(0.5, 0.8));
    auto kind_of = [](double alpha, double beta) {
      try {
        GrowthLaw law(alpha, beta);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::kInternal;
    };
    CHECK(kind_of(1.0, 1.0) == ErrorKind::kInvalidGrowth);
    CHECK(kind_of(0.0, 0.5) == ErrorKind::kInvalidGrowth);
    CHECK(kind_of(2.0, 0.0) == ErrorKind::kInvalidGrowth);
    CHECK(kind_of(2.0, 1.1) == ErrorKind::kInvalidGrowth);
    CHECK(std::isinf(GrowthLaw(1.5, 1.0).fixed_point()));
  }

  TEST_CASE("exponential coefficients follow alpha = ln b") {
    const GrowthLaw law = exponential_coefficients({50.0, std::exp(1.5)});
    CHECK(law.alpha() == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(law.beta() == 1.0);
    CHECK_THROWS_AS(exponential_coefficients({50.0, 2.0}), Error);  // ln 2 < 1
    try {
      exponential_coefficients({0.0, 10.0});
      FAIL("expected domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kDomain);
    }
  }

  TEST_CASE("gompertz coefficients match the continuous curve") {
    const GrowthLaw law = gompertz_coefficients({50.0, 0.72, 0.18});
    CHECK(law.beta() == doctest::Approx(std::exp(-0.18)).epsilon(1e-14));
    CHECK(law.alpha() == doctest::Approx(3.6815942445).epsilon(1e-10));
    CHECK(law.beta() == doctest::Approx(0.835270211).epsilon(1e-9));
    CHECK(law.fixed_point() == doctest::Approx(50.0 * std::exp(4.0)).epsilon(1e-12));

    // One period of the recurrence equals one time unit along the curve.
    for (double s : {60.0, 150.0, 300.0, 500.0, 2000.0}) {
      const double t0 = gompertz_time_of(s, 50.0, 0.72, 0.18);
      CHECK(relative_close(grow(s, law), gompertz_curve(t0 + 1.0, 50.0, 0.72, 0.18), 1e-9));
    }
    CHECK(grow(150.0, law) == doctest::Approx(241.9135131).epsilon(1e-9));
  }

  TEST_CASE("treat applies the reduction after growth") {
    const GrowthLaw law(1.5, 1.0);
    CHECK(treat(400.0, law, 0.6) == doctest::Approx(240.0));
    CHECK(grow(400.0, law) == doctest::Approx(600.0));
  }

  TEST_CASE("untreated trajectory grows by 1.5 per period") {
    ProblemSpec spec = hand_spec(6);
    const Simulation sim = simulate(spec, Schedule::untreated(6));
    const double expected[] = {50, 75, 112.5, 168.75, 253.125, 379.6875, 569.53125};
    REQUIRE(sim.trajectory.sizes.size() == 7);
    for (int i = 0; i < 7; ++i) CHECK(sim.trajectory.sizes[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    REQUIRE(sim.feasibility.band.size() == 1);
    CHECK(sim.feasibility.band[0].index == 7);
    CHECK(sim.feasibility.band[0].bound == Bound::kUpper);

    spec.include_terminal = false;
    CHECK(simulate(spec, Schedule::untreated(6)).feasibility.feasible());
  }

  TEST_CASE("treated trajectory from 400") {
    ProblemSpec spec = hand_spec(5);
    spec.s_init = 400.0;
    const Simulation sim = simulate(spec, Schedule::from_periods(5, {1, 3}));
    const double expected[] = {400, 240, 360, 216, 324, 486};
    for (int i = 0; i < 6; ++i) CHECK(sim.trajectory.sizes[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(sim.feasibility.feasible());
    CHECK(sim.trajectory.treated == std::vector<bool>{true, false, true, false, false});
  }

  TEST_CASE("band violations below the floor and disabled band") {
    ProblemSpec spec = hand_spec(3);
    spec.s_init = 20.0;
    const Schedule s = Schedule::from_periods(3, {1});  // 20 -> 12 -> 18 -> 27
    CHECK(simulate(spec, s).feasibility.feasible());
    spec.s_min = 15.0;
    const Simulation sim = simulate(spec, s);
    REQUIRE(sim.feasibility.band.size() == 1);
    CHECK(sim.feasibility.band[0].index == 2);
    CHECK(sim.feasibility.band[0].bound == Bound::kLower);
    CHECK(simulate(spec, s, false).feasibility.band.empty());
  }

  TEST_CASE("floor mode clamps instead of violating") {
    ProblemSpec spec = hand_spec(3);
    spec.s_init = 20.0;
    spec.s_min = 15.0;
    spec.floor_mode = true;
    const Simulation sim = simulate(spec, Schedule::from_periods(3, {1}));
    CHECK(sim.feasibility.feasible());
    CHECK(sim.trajectory.sizes[1] == doctest::Approx(15.0));
    CHECK(sim.trajectory.sizes[2] == doctest::Approx(22.5));
  }

  TEST_CASE("schedule faults are reported") {
    ProblemSpec spec = hand_spec(6);
    spec.s_init = 100.0;
    spec.spacing_delta = 1;
    spec.forced_periods = {5};
    const Simulation sim = simulate(spec, Schedule::from_periods(6, {1, 2}));
    bool spacing = false;
    bool forced = false;
    for (const ScheduleViolation& v : sim.feasibility.schedule) {
      spacing |= v.fault == ScheduleFault::kSpacing && v.period == 2;
      forced |= v.fault == ScheduleFault::kForcedMissing && v.period == 5;
    }
    CHECK(spacing);
    CHECK(forced);

    Schedule bad = Schedule::untreated(6);
    bad.choice[0] = 2;
    bool unknown = false;
    for (const ScheduleViolation& v : simulate(spec, bad).feasibility.schedule) {
      unknown |= v.fault == ScheduleFault::kUnknownTreatment;
    }
    CHECK(unknown);
  }

  TEST_CASE("schedule helpers") {
    const Schedule s = Schedule::from_periods(6, {2, 5}, 2);
    CHECK(s.horizon() == 6);
    CHECK(s.treated(2));
    CHECK_FALSE(s.treated(3));
    CHECK(s.treatment_at(5) == 2);
    CHECK(s.treated_periods() == std::vector<int>{2, 5});
    CHECK(s.count(2) == 2);
    CHECK(s.count(1) == 0);
  }

  TEST_CASE("validation diagnostics") {
    CHECK_FALSE(has_errors(validate_spec(table1())));
    CHECK_FALSE(has_errors(validate_spec(table1(Program::kP2))));
    CHECK_FALSE(has_errors(validate_spec(table3(Program::kP3))));

    ProblemSpec spec = table1();
    spec.s_init = 600.0;
    CHECK(has_code(validate_spec(spec), "init_above_tolerance", Severity::kError));

    spec = table1();
    spec.spacing_delta = 1;
    spec.forced_periods = {5, 6};
    CHECK(has_code(validate_spec(spec), "forced_spacing_conflict", Severity::kError));

    spec = table1();
    spec.horizon = 0;
    CHECK(has_code(validate_spec(spec), "empty_horizon", Severity::kError));
    try {
      require_valid(spec);
      FAIL("expected invalid spec");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInvalidSpec);
    }

    spec = table1();
    spec.treatments[0].reduction = 1.0;
    CHECK(has_code(validate_spec(spec), "bad_reduction", Severity::kError));

    spec = table1();
    spec.forced_periods = {53};
    CHECK(has_code(validate_spec(spec), "forced_outside_horizon", Severity::kError));

    // (1 - 0.95) * 1.5 * 50 < 10: reported, not rejected.
    spec = table1();
    spec.treatments[0].reduction = 0.95;
    const auto ds = validate_spec(spec);
    CHECK(has_code(ds, "treatment_undershoots_floor", Severity::kWarning));
    CHECK_FALSE(has_errors(ds));

    spec = table3();
    spec.s_tol = 3000.0;  // above the plateau 2729.91: growth fails at the top of the band
    CHECK(has_code(validate_spec(spec), "no_growth", Severity::kError));
  }

  TEST_CASE("action shifts and cost") {
    const ProblemSpec spec = table1(Program::kP2);
    const auto shifts = action_shifts(spec);
    REQUIRE(shifts.size() == 3);
    CHECK(shifts[0] == doctest::Approx(std::log(1.5)));
    CHECK(shifts[1] == doctest::Approx(std::log(0.4 * 1.5)));
    CHECK(shifts[2] == doctest::Approx(std::log(0.3 * 1.5)));
    Schedule s = Schedule::untreated(52);
    s.choice[0] = 1;
    s.choice[3] = 2;
    s.choice[9] = 2;
    CHECK(schedule_cost(spec, s) == 36.0);
  }

  TEST_CASE("property: log and multiplicative recurrences agree") {
    std::mt19937_64 rng(11);
    RandomInstanceOptions options;
    options.allow_floor_mode = true;
    for (int trial = 0; trial < 300; ++trial) {
      const ProblemSpec spec = random_instance(rng, options);
      const Schedule s = random_schedule(rng, spec);
      const auto logs = log_recurrence(spec, s);
      const auto sizes = multiplicative_recurrence(spec, s);
      REQUIRE(logs.size() == sizes.size());
      for (std::size_t i = 0; i < sizes.size(); ++i) CHECK(relative_close(std::exp(logs[i]), sizes[i], 1e-9));
    }
  }

  TEST_CASE("property: grow and treat are increasing") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> size(1.0, 5000.0);
    for (int trial = 0; trial < 500; ++trial) {
      const ProblemSpec spec = random_instance(rng);
      const double a = size(rng);
      const double b = a * (1.0 + 1e-6) + 1e-3;
      CHECK(grow(a, spec.growth) < grow(b, spec.growth));
      CHECK(treat(a, spec.growth, 0.6) < treat(b, spec.growth, 0.6));
    }
  }

  TEST_CASE("property: gompertz iteration converges to the fixed point") {
    const GrowthLaw law = gompertz_coefficients({50.0, 0.72, 0.18});
    const double target = law.fixed_point();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> start(1.0, 10.0 * target);
    for (int trial = 0; trial < 100; ++trial) {
      double s = start(rng);
      int steps = 0;
      while (std::abs(s - target) > 1e-3 * target && steps < 200) {
        s = grow(s, law);
        ++steps;
      }
      CHECK(std::abs(s - target) <= 1e-3 * target);
    }
  }

  TEST_CASE("property: treating later is never worse for beta <= 1") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> size(1.0, 5000.0);
    std::uniform_real_distribution<double> rf(0.01, 0.99);
    for (int trial = 0; trial < 500; ++trial) {
      const ProblemSpec spec = random_instance(rng);
      const double s = size(rng);
      const double r = rf(rng);
      const double later = treat(grow(s, spec.growth), spec.growth, r);
      const double earlier = grow(treat(s, spec.growth, r), spec.growth);
      if (spec.growth.beta() == 1.0) {
        CHECK(relative_close(later, earlier, 1e-12));
      } else {
        CHECK(later < earlier);
      }
    }
  }
}
