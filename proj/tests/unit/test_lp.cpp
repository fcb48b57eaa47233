#include <sstream>
#include <string>

#include "chemosched/milp.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace chemosched;
using chemosched::testing::table1;
using chemosched::testing::table3;

namespace {

std::string section(const std::string& text, const std::string& name) {
  const auto start = text.find("\n" + name + "\n");
  REQUIRE(start != std::string::npos);
  const auto body = start + name.size() + 2;
  auto end = body;
  std::istringstream in(text.substr(body));
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == ' ') end += line.size() + 1;
  return text.substr(body, end - body);
}

std::size_t lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

void check_same_model(const MilpModel& a, const MilpModel& b) {
  CHECK(a.label == b.label);
  REQUIRE(a.variables.size() == b.variables.size());
  REQUIRE(a.constraints.size() == b.constraints.size());
  for (const Variable& v : a.variables) {
    const int j = b.find(v.name);
    REQUIRE(j >= 0);
    const Variable& w = b.variables[static_cast<std::size_t>(j)];
    CHECK(v.kind == w.kind);
    CHECK(v.lower == w.lower);
    CHECK(v.upper == w.upper);
  }
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const Constraint& c = a.constraints[i];
    const Constraint& d = b.constraints[i];
    CHECK(c.name == d.name);
    CHECK(c.family == d.family);
    CHECK(c.sense == d.sense);
    CHECK(c.rhs == d.rhs);
    REQUIRE(c.terms.size() == d.terms.size());
    for (std::size_t t = 0; t < c.terms.size(); ++t) {
      CHECK(a.variables[static_cast<std::size_t>(c.terms[t].var)].name ==
            b.variables[static_cast<std::size_t>(d.terms[t].var)].name);
      CHECK(c.terms[t].coef == d.terms[t].coef);
    }
  }
  CHECK(a.budget == b.budget);
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("P1 export declares the expected variables") {
    const std::string text = export_lp(build_p1(table1()));
    CHECK(lines(section(text, "Binaries")) == 52);
    CHECK(lines(section(text, "Bounds")) == 53);
    CHECK(text.rfind("\\ model: P1\n", 0) == 0);
    CHECK(text.find("End\n") != std::string::npos);
  }

  TEST_CASE("round trip") {
    for (const MilpModel& m : {build_p1(table1()), build_p2(table3(Program::kP2)), build_p3(table1(Program::kP3)),
                               build_pi(table1(Program::kP2), Program::kP2, 217)}) {
      const MilpModel back = parse_lp(export_lp(m));
      check_same_model(m, back);
      // Min-max models list LSmax first once parsed, which reorders Bounds.
      if (!m.budget) CHECK(export_lp(back) == export_lp(m));
    }
  }

  TEST_CASE("floor mode is linearized with one selector per period") {
    ProblemSpec spec = table3();
    spec.floor_mode = true;
    const MilpModel m = build_p1(spec);
    CHECK(m.max_equalities.size() == 52);
    CHECK(m.count_family(family::kRecurrence) == 0);
    const MilpModel back = parse_lp(export_lp(m));
    CHECK(back.count(VarKind::kBinary) == 104);
    CHECK(back.count_family(family::kFloorLink) == 4 * 52);
  }

  TEST_CASE("parse errors") {
    auto kind = [](const std::string& text) {
      try {
        parse_lp(text);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::kInternal;
    };
    CHECK(kind("Minimize\n obj: 1 x\nSubject To\n c1: 1 x >= \nEnd\n") == ErrorKind::kParse);
    CHECK(kind("Minimize\n obj: 1 x\n") == ErrorKind::kParse);
    CHECK(kind("garbage\n") == ErrorKind::kParse);
    CHECK(kind("Minimize\n obj: 1 x\nBounds\n x between 1 and 2\nEnd\n") == ErrorKind::kParse);
  }

  TEST_CASE("parser accepts glued names, implicit coefficients and one-sided bounds") {
    const MilpModel m = parse_lp("Maximize\n obj: x + 2 y\nSubject To\n c1:x - y <= 4\nBounds\n y >= -3\nBinaries\n x\nEnd\n");
    CHECK(m.sense == ObjectiveSense::kMaximize);
    REQUIRE(m.constraints.size() == 1);
    CHECK(m.constraints[0].terms[1].coef == -1.0);
    CHECK(m.variables[static_cast<std::size_t>(m.find("y"))].lower == -3.0);
    CHECK(m.count(VarKind::kBinary) == 1);
  }
}
