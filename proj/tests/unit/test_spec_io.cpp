#include <filesystem>
#include <random>

#include "chemosched/spec_io.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace chemosched;
using chemosched::testing::scratch_dir;
using chemosched::testing::table1;
using chemosched::testing::table3;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    spec_from_json(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

const char* kMinimal = R"({"K": 6, "s_init": 50, "s_min": 10, "s_tol": 500,
  "growth": {"alpha": 1.5, "beta": 1}, "treatments": [{"id": 1, "cost": 10, "reduction": 0.6}]})";

}  // namespace

TEST_SUITE("spec_io") {
  TEST_CASE("defaults for optional fields") {
    const ProblemSpec spec = spec_from_json(kMinimal);
    CHECK(spec.horizon == 6);
    CHECK(spec.spacing_delta == 0);
    CHECK(spec.forced_periods.empty());
    CHECK_FALSE(spec.floor_mode);
    CHECK(spec.include_terminal);
    CHECK(spec.growth == GrowthLaw(1.5, 1.0));
  }

  TEST_CASE("parameter blocks are converted on load") {
    const ProblemSpec exp = spec_from_json(R"({"K": 52, "s_init": 50, "s_min": 10, "s_tol": 500,
      "growth": {"exponential": {"phi0": 50, "b": 4.4816890703380645}},
      "treatments": [{"cost": 10, "reduction": 0.6}]})");
    CHECK(exp.growth.alpha() == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(exp.treatments[0].id == 1);
    const ProblemSpec gom = spec_from_json(R"({"K": 52, "s_init": 150, "s_min": 60, "s_tol": 500,
      "growth": {"gompertz": {"phi0": 50, "a": 0.72, "b": 0.18}},
      "treatments": [{"id": 1, "cost": 10, "reduction": 0.6}]})");
    CHECK(gom.growth == table3().growth);
  }

  TEST_CASE("round trip is exact") {
    for (const ProblemSpec& spec : {table1(), table1(Program::kP2), table3(Program::kP3)}) {
      CHECK(spec_from_json(spec_to_json(spec)) == spec);
    }
    std::mt19937_64 rng(71);
    RandomInstanceOptions options;
    options.allow_floor_mode = true;
    options.allow_forced = true;
    options.randomize_terminal = true;
    for (int i = 0; i < 200; ++i) {
      const ProblemSpec spec = random_instance(rng, options);
      CHECK(spec_from_json(spec_to_json(spec)) == spec);
    }
  }

  TEST_CASE("file round trip") {
    const auto dir = scratch_dir("spec_io");
    ProblemSpec spec = table3(Program::kP2);
    spec.forced_periods = {3, 9};
    spec.floor_mode = true;
    save_spec(dir / "spec.json", spec);
    CHECK(load_spec(dir / "spec.json") == spec);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("errors") {
    CHECK(kind_of("{") == ErrorKind::kParse);
    CHECK(kind_of("[]") == ErrorKind::kParse);
    CHECK(kind_of(R"({"K": 6})") == ErrorKind::kParse);
    CHECK(kind_of(R"({"K": 6.5, "s_init": 50, "s_min": 10, "s_tol": 500, "growth": {"alpha": 1.5, "beta": 1},
      "treatments": []})") == ErrorKind::kParse);
    std::string extra = kMinimal;
    extra.insert(1, "\"horizon\": 6, ");
    CHECK(kind_of(extra) == ErrorKind::kParse);
    CHECK(kind_of(R"({"K": 6, "s_init": 50, "s_min": 10, "s_tol": 500, "growth": {"alpha": 0.9, "beta": 1},
      "treatments": []})") == ErrorKind::kInvalidGrowth);
    try {
      load_spec("/nonexistent/chemosched/spec.json");
      FAIL("expected io error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kIo);
    }
  }
}
