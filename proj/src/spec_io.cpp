#include "chemosched/spec_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace chemosched {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::kParse, "spec: " + what); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) fail("unknown key '" + key + "' in " + where);
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail("missing '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) fail("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) fail(what + " must be an integer");
  return v.get<int>();
}

GrowthLaw growth_from(const json& g) {
  if (!g.is_object()) fail("growth must be an object");
  if (g.contains("exponential")) {
    reject_unknown(g, {"exponential"}, "growth");
    const json& p = g["exponential"];
    reject_unknown(p, {"phi0", "b"}, "growth.exponential");
    return exponential_coefficients({number(p, "phi0", "growth.exponential"), number(p, "b", "growth.exponential")});
  }
  if (g.contains("gompertz")) {
    reject_unknown(g, {"gompertz"}, "growth");
    const json& p = g["gompertz"];
    reject_unknown(p, {"phi0", "a", "b"}, "growth.gompertz");
    return gompertz_coefficients(
        {number(p, "phi0", "growth.gompertz"), number(p, "a", "growth.gompertz"), number(p, "b", "growth.gompertz")});
  }
  reject_unknown(g, {"alpha", "beta"}, "growth");
  return GrowthLaw(number(g, "alpha", "growth"), number(g, "beta", "growth"));
}

}  // namespace

ProblemSpec spec_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  reject_unknown(doc,
                 {"K", "s_init", "s_min", "s_tol", "growth", "treatments", "spacing_delta", "forced_periods",
                  "floor_mode", "include_terminal"},
                 "spec");
  ProblemSpec spec;
  spec.horizon = integer(field(doc, "K", "spec"), "K");
  spec.s_init = number(doc, "s_init", "spec");
  spec.s_min = number(doc, "s_min", "spec");
  spec.s_tol = number(doc, "s_tol", "spec");
  spec.growth = growth_from(field(doc, "growth", "spec"));

  const json& menu = field(doc, "treatments", "spec");
  if (!menu.is_array()) fail("treatments must be an array");
  for (const json& t : menu) {
    if (!t.is_object()) fail("treatment entries must be objects");
    reject_unknown(t, {"id", "cost", "reduction"}, "treatment");
    Treatment treatment;
    treatment.id = t.contains("id") ? integer(t["id"], "treatment id") : static_cast<int>(spec.treatments.size()) + 1;
    treatment.cost = number(t, "cost", "treatment");
    treatment.reduction = number(t, "reduction", "treatment");
    spec.treatments.push_back(treatment);
  }
  if (doc.contains("spacing_delta")) spec.spacing_delta = integer(doc["spacing_delta"], "spacing_delta");
  if (doc.contains("forced_periods")) {
    const json& forced = doc["forced_periods"];
    if (!forced.is_array()) fail("forced_periods must be an array");
    for (const json& k : forced) spec.forced_periods.insert(integer(k, "forced period"));
  }
  for (const char* flag : {"floor_mode", "include_terminal"}) {
    if (!doc.contains(flag)) continue;
    if (!doc[flag].is_boolean()) fail(std::string(flag) + " must be a boolean");
    (std::string_view(flag) == "floor_mode" ? spec.floor_mode : spec.include_terminal) = doc[flag].get<bool>();
  }
  return spec;
}

std::string spec_to_json(const ProblemSpec& spec) {
  json doc = json::object();
  doc["K"] = spec.horizon;
  doc["s_init"] = spec.s_init;
  doc["s_min"] = spec.s_min;
  doc["s_tol"] = spec.s_tol;
  doc["growth"] = {{"alpha", spec.growth.alpha()}, {"beta", spec.growth.beta()}};
  json menu = json::array();
  for (const Treatment& t : spec.treatments) menu.push_back({{"id", t.id}, {"cost", t.cost}, {"reduction", t.reduction}});
  doc["treatments"] = menu;
  doc["spacing_delta"] = spec.spacing_delta;
  doc["forced_periods"] = spec.forced_periods;
  doc["floor_mode"] = spec.floor_mode;
  doc["include_terminal"] = spec.include_terminal;
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

ProblemSpec load_spec(const std::filesystem::path& path) { return spec_from_json(read_file(path)); }

void save_spec(const std::filesystem::path& path, const ProblemSpec& spec) { write_file(path, spec_to_json(spec)); }

}  // namespace chemosched
