#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "chemosched/milp.hpp"

namespace chemosched {

namespace {

constexpr std::size_t kTermsPerLine = 8;

std::string number(double x) {
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view sense_text(Sense sense) {
  switch (sense) {
    case Sense::kLessEqual: return "<=";
    case Sense::kGreaterEqual: return ">=";
    case Sense::kEqual: return "=";
  }
  return "=";
}

class LpWriter {
 public:
  explicit LpWriter(const MilpModel& model) : model_(model) {}

  void expression(const std::vector<Term>& terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i > 0 && i % kTermsPerLine == 0) out_ << "\n   ";
      const double c = terms[i].coef;
      if (i == 0) {
        out_ << ' ' << number(c);
      } else {
        out_ << (c < 0 ? " - " : " + ") << number(std::abs(c));
      }
      out_ << ' ' << model_.variables[static_cast<std::size_t>(terms[i].var)].name;
    }
    if (terms.empty()) out_ << " 0";
  }

  void row(const std::string& name, const std::vector<Term>& terms, Sense sense, double rhs) {
    out_ << ' ' << name << ':';
    expression(terms);
    out_ << ' ' << sense_text(sense) << ' ' << number(rhs) << '\n';
  }

  std::ostringstream& out() { return out_; }

 private:
  const MilpModel& model_;
  std::ostringstream out_;
};

// Big-M for the floor linearization of LS_k = max(E, floor).  It must cover
// floor - E when the floor is active and LS_k - floor <= log S_Tol - floor when
// it is not.
double floor_big_m(const MilpModel& model, const MaxEquality& eq) {
  double e_min = eq.constant;
  double upper = eq.floor;
  for (const Term& t : eq.terms) {
    const Variable& v = model.variables[static_cast<std::size_t>(t.var)];
    e_min += t.coef * (t.coef >= 0 ? v.lower : v.upper);
  }
  upper = std::max(upper, model.variables[static_cast<std::size_t>(eq.target)].upper);
  return std::max({upper - eq.floor, eq.floor - e_min, 1.0});
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  MilpModel linear = model;
  // Floor mode: Z_k = 1 selects LS_k = E, Z_k = 0 selects LS_k = floor.
  //   LS_k - E >= 0,  LS_k >= floor,  LS_k - E - M Z_k <= 0,  LS_k + M Z_k <= floor + M
  for (const MaxEquality& eq : model.max_equalities) {
    const std::string suffix = eq.name.substr(eq.name.find('_') + 1);
    const int z = linear.add_variable({"Z_" + suffix, VarKind::kBinary, 0.0, 1.0});
    const double m = floor_big_m(model, eq);
    std::vector<Term> diff{{eq.target, 1.0}};
    for (const Term& t : eq.terms) diff.push_back({t.var, -t.coef});
    const std::string fam(family::kFloorLink);
    linear.constraints.push_back({"floorge_" + suffix, fam, diff, Sense::kGreaterEqual, eq.constant});
    linear.constraints.push_back({"floormin_" + suffix, fam, {{eq.target, 1.0}}, Sense::kGreaterEqual, eq.floor});
    std::vector<Term> upper = diff;
    upper.push_back({z, -m});
    linear.constraints.push_back({"floorle_" + suffix, fam, upper, Sense::kLessEqual, eq.constant});
    linear.constraints.push_back(
        {"floorsel_" + suffix, fam, {{eq.target, 1.0}, {z, m}}, Sense::kLessEqual, eq.floor + m});
  }
  linear.max_equalities.clear();

  LpWriter w(linear);
  auto& out = w.out();
  out << "\\ model: " << linear.label << '\n';
  out << (linear.sense == ObjectiveSense::kMinimize ? "Minimize" : "Maximize") << '\n';
  out << " obj:";
  w.expression(linear.objective);
  out << "\nSubject To\n";
  for (const Constraint& c : linear.constraints) w.row(c.name, c.terms, c.sense, c.rhs);
  out << "Bounds\n";
  for (const Variable& v : linear.variables) {
    if (v.kind == VarKind::kBinary) continue;
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << ' ' << v.name << " free\n";
    } else {
      out << ' ' << number(v.lower) << " <= " << v.name << " <= " << number(v.upper) << '\n';
    }
  }
  out << "Binaries\n";
  for (const Variable& v : linear.variables) {
    if (v.kind == VarKind::kBinary) out << ' ' << v.name << '\n';
  }
  out << "End\n";
  return out.str();
}

namespace {

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinaries, kEnd };

std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_number(const std::string& token, double& value) {
  if (token.empty()) return false;
  char* end = nullptr;
  value = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size();
}

bool is_comparator(const std::string& t) {
  return t == "<=" || t == ">=" || t == "=" || t == "=<" || t == "=>" || t == "<" || t == ">";
}

Sense comparator_sense(const std::string& t) {
  if (t == "<=" || t == "=<" || t == "<") return Sense::kLessEqual;
  if (t == ">=" || t == "=>" || t == ">") return Sense::kGreaterEqual;
  return Sense::kEqual;
}

std::string family_of(const std::string& row) {
  static const std::vector<std::pair<std::string, std::string_view>> prefixes = {
      {"fix_", family::kFix},          {"rec_", family::kRecurrence},     {"amo_", family::kAtMostOne},
      {"spacetail_", family::kSpacingTail}, {"space_", family::kSpacing}, {"force_", family::kForced},
      {"budget", family::kBudget},     {"maxlink_", family::kMaxLink},    {"floor", family::kFloorLink},
  };
  for (const auto& [prefix, fam] : prefixes) {
    if (row.rfind(prefix, 0) == 0) return std::string(fam);
  }
  return "other";
}

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::kParse, "lp: " + what); }

class LpReader {
 public:
  MilpModel read(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (line[first] == '\\') {
        const std::string body = line.substr(first + 1);
        const auto pos = body.find("model:");
        if (pos != std::string::npos) {
          std::string label = body.substr(pos + 6);
          label.erase(0, label.find_first_not_of(' '));
          model_.label = label;
        }
        continue;
      }
      const std::string key = lower_case(line.substr(first));
      if (key == "minimize" || key == "minimise" || key == "min") {
        flush();
        section_ = Section::kObjective;
        model_.sense = ObjectiveSense::kMinimize;
        continue;
      }
      if (key == "maximize" || key == "maximise" || key == "max") {
        flush();
        section_ = Section::kObjective;
        model_.sense = ObjectiveSense::kMaximize;
        continue;
      }
      if (key == "subject to" || key == "st" || key == "s.t.") {
        flush();
        section_ = Section::kConstraints;
        continue;
      }
      if (key == "bounds") {
        flush();
        section_ = Section::kBounds;
        continue;
      }
      if (key == "binaries" || key == "binary") {
        flush();
        section_ = Section::kBinaries;
        continue;
      }
      if (key == "end") {
        flush();
        section_ = Section::kEnd;
        continue;
      }
      std::istringstream tokens(line);
      std::vector<std::string> words;
      for (std::string t; tokens >> t;) split_name(t, words);
      switch (section_) {
        case Section::kObjective:
        case Section::kConstraints:
          pending_.insert(pending_.end(), words.begin(), words.end());
          break;
        case Section::kBounds: bound(words); break;
        case Section::kBinaries:
          for (const std::string& name : words) {
            Variable& v = model_.variables[static_cast<std::size_t>(variable(name))];
            v.kind = VarKind::kBinary;
            v.lower = 0.0;
            v.upper = 1.0;
          }
          break;
        case Section::kNone:
        case Section::kEnd: fail("text outside any section: " + line);
      }
    }
    if (section_ != Section::kEnd) fail("missing End");
    for (const Constraint& c : model_.constraints) {
      if (c.family == family::kBudget) model_.budget = c.rhs;
    }
    return std::move(model_);
  }

 private:
  // "name:" may be glued to the first term.
  static void split_name(const std::string& t, std::vector<std::string>& words) {
    const auto colon = t.find(':');
    if (colon == std::string::npos || colon + 1 == t.size()) {
      words.push_back(t);
      return;
    }
    words.push_back(t.substr(0, colon + 1));
    words.push_back(t.substr(colon + 1));
  }

  int variable(const std::string& name) {
    const auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const int idx = model_.add_variable({name, VarKind::kContinuous, 0.0, std::numeric_limits<double>::infinity()});
    index_.emplace(name, idx);
    return idx;
  }

  // Parses [sign] [coef] var sequences starting at pos, up to a comparator or
  // the end of the token list.
  std::vector<Term> terms(const std::vector<std::string>& t, std::size_t& pos) {
    std::vector<Term> out;
    while (pos < t.size() && !is_comparator(t[pos])) {
      double sign = 1.0;
      while (pos < t.size() && (t[pos] == "+" || t[pos] == "-")) {
        if (t[pos] == "-") sign = -sign;
        ++pos;
      }
      if (pos >= t.size()) fail("dangling sign");
      double coef = 1.0;
      double value = 0.0;
      if (parse_number(t[pos], value)) {
        coef = value;
        ++pos;
        if (pos >= t.size() || is_comparator(t[pos])) {
          if (value == 0.0 && out.empty()) break;  // empty expression written as 0
          fail("coefficient without variable");
        }
      }
      out.push_back({variable(t[pos]), sign * coef});
      ++pos;
    }
    return out;
  }

  void flush() {
    const std::vector<std::string> t = std::move(pending_);
    pending_.clear();
    if (t.empty()) return;
    std::size_t pos = 0;
    if (section_ == Section::kObjective) {
      if (t[0].back() == ':') ++pos;
      model_.objective = terms(t, pos);
      if (pos != t.size()) fail("objective has trailing tokens");
      return;
    }
    while (pos < t.size()) {
      if (t[pos].back() != ':') fail("row without a name near '" + t[pos] + "'");
      Constraint c;
      c.name = t[pos].substr(0, t[pos].size() - 1);
      c.family = family_of(c.name);
      ++pos;
      c.terms = terms(t, pos);
      if (pos >= t.size()) fail("row " + c.name + " has no comparator");
      c.sense = comparator_sense(t[pos++]);
      if (pos >= t.size() || !parse_number(t[pos], c.rhs)) fail("row " + c.name + " has no right-hand side");
      ++pos;
      model_.constraints.push_back(std::move(c));
    }
  }

  void bound(const std::vector<std::string>& w) {
    double a = 0.0;
    double b = 0.0;
    if (w.size() == 2 && lower_case(w[1]) == "free") {
      Variable& v = model_.variables[static_cast<std::size_t>(variable(w[0]))];
      v.lower = -std::numeric_limits<double>::infinity();
      v.upper = std::numeric_limits<double>::infinity();
    } else if (w.size() == 5 && parse_number(w[0], a) && parse_number(w[4], b) && w[1] == "<=" && w[3] == "<=") {
      Variable& v = model_.variables[static_cast<std::size_t>(variable(w[2]))];
      v.lower = a;
      v.upper = b;
    } else if (w.size() == 3 && parse_number(w[2], a) && is_comparator(w[1])) {
      Variable& v = model_.variables[static_cast<std::size_t>(variable(w[0]))];
      const Sense s = comparator_sense(w[1]);
      if (s != Sense::kLessEqual) v.lower = a;
      if (s != Sense::kGreaterEqual) v.upper = a;
    } else {
      fail("unsupported bound line");
    }
  }

  MilpModel model_;
  std::map<std::string, int> index_;
  Section section_ = Section::kNone;
  std::vector<std::string> pending_;
};

}  // namespace

MilpModel parse_lp(std::string_view text) { return LpReader{}.read(text); }

}  // namespace chemosched
