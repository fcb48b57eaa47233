#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chemosched/heuristic.hpp"
#include "chemosched/milp.hpp"
#include "chemosched/oracle.hpp"
#include "chemosched/random_instances.hpp"
#include "chemosched/report.hpp"
#include "chemosched/reproduce.hpp"
#include "chemosched/solver.hpp"
#include "chemosched/spec_io.hpp"

namespace chemosched::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string spec_path;
  std::string program = "p1";
  std::string objective = "min-cost";
  std::optional<double> budget;
  std::string out_dir = ".";
  bool floor_mode = false;
  std::string include_terminal;  // "", "true" or "false"
  std::uint64_t seed = 1;

  std::string schedule;  // simulate
  std::string budgets;   // sweep
  std::string table;     // reproduce
  int count = 50;        // oracle-check
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
    case ErrorKind::kParse:
    case ErrorKind::kInvalidSpec:
    case ErrorKind::kInvalidGrowth:
    case ErrorKind::kDomain:
    case ErrorKind::kWrongBuilder: return kExitUsage;
    default: return kExitFailure;
  }
}

Program program_of(const RunConfig& cfg) {
  try {
    return parse_program(cfg.program);
  } catch (const Error&) {
    throw UsageError("--program must be p1, p2 or p3");
  }
}

Objective objective_of(const RunConfig& cfg) {
  if (cfg.objective == "min-cost") {
    if (cfg.budget) throw UsageError("--budget only applies to --objective min-max");
    return Objective::min_cost();
  }
  if (!cfg.budget) throw UsageError("--objective min-max requires --budget");
  return Objective::min_max_size(*cfg.budget);
}

ProblemSpec load(const RunConfig& cfg, std::ostream& err) {
  if (cfg.spec_path.empty()) throw UsageError("--spec is required");
  ProblemSpec spec = load_spec(cfg.spec_path);
  if (cfg.floor_mode) spec.floor_mode = true;
  if (!cfg.include_terminal.empty()) spec.include_terminal = cfg.include_terminal == "true";
  const std::vector<Diagnostic> diagnostics = validate_spec(spec);
  for (const Diagnostic& d : diagnostics) {
    err << (d.severity == Severity::kError ? "error" : "warning") << " [" << d.code << "] " << d.message << '\n';
  }
  if (has_errors(diagnostics)) throw Error(ErrorKind::kInvalidSpec, "spec " + cfg.spec_path + " is invalid");
  return spec;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

double parse_double(const std::string& text, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& text, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

// "3,7,12" treats periods 3, 7, 12 with the first treatment; "3:2" selects
// the second menu entry in period 3.
Schedule parse_schedule(const std::string& text, const ProblemSpec& spec) {
  Schedule schedule = Schedule::untreated(spec.horizon);
  for (const std::string& item : split(text, ',')) {
    const auto colon = item.find(':');
    const int period = parse_int(item.substr(0, colon), "schedule period");
    const int choice = colon == std::string::npos ? 1 : parse_int(item.substr(colon + 1), "treatment position");
    if (period < 1 || period > spec.horizon) throw UsageError("schedule period " + item + " outside 1..K");
    schedule.choice[static_cast<std::size_t>(period - 1)] = choice;
  }
  return schedule;
}

// "200,210,230" or "200:240:10" (inclusive range).
std::vector<double> parse_budgets(const std::string& text) {
  std::vector<double> budgets;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("--budgets range must be FROM:TO:STEP");
    const double from = parse_double(parts[0], "budget");
    const double to = parse_double(parts[1], "budget");
    const double step = parse_double(parts[2], "budget step");
    if (!(step > 0.0) || to < from) throw UsageError("--budgets range needs FROM <= TO and STEP > 0");
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i) budgets.push_back(from + static_cast<double>(i) * step);
  } else {
    for (const std::string& part : split(text, ',')) budgets.push_back(parse_double(part, "budget"));
  }
  if (budgets.empty()) throw UsageError("--budgets is empty");
  std::sort(budgets.begin(), budgets.end());
  return budgets;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Program program = program_of(cfg);
  const Objective objective = objective_of(cfg);
  const ProblemSpec spec = load(cfg, err);
  const SolveReport report = solve(spec, program, objective);
  const fs::path dir = output_dir(cfg);
  write_file(dir / "report.json", solve_report_json(spec, program, report));
  if (report.status != SolveStatus::kOptimal) {
    out << "status infeasible\n";
    return kExitFailure;
  }
  write_file(dir / "trajectory.csv", trajectory_csv(spec, report.schedule, report.trajectory));
  out << "status optimal\n";
  out << "cost " << report.cost << '\n';
  out << "max size " << two_decimals(report.max_size) << " at S_" << report.max_size_index << '\n';
  out << "treated periods";
  for (int k : report.schedule.treated_periods()) out << ' ' << k;
  out << '\n';
  return kExitOk;
}

int cmd_heuristic(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = load(cfg, err);
  const HeuristicResult result = heuristic_schedule(spec);
  const fs::path dir = output_dir(cfg);
  write_file(dir / "heuristic.json", heuristic_json(spec, result));
  write_file(dir / "trajectory.csv", trajectory_csv(spec, result.schedule, result.trajectory));
  out << "threshold " << two_decimals(result.threshold) << '\n';
  out << "cost " << result.cost << '\n';
  out << "optimality certified " << (result.optimality_certified ? "true" : "false") << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ProblemSpec spec = load(cfg, err);
  const Schedule schedule = parse_schedule(cfg.schedule, spec);
  const Simulation sim = simulate(spec, schedule);
  const fs::path dir = output_dir(cfg);
  write_file(dir / "simulation.json", simulation_json(spec, schedule, sim));
  write_file(dir / "trajectory.csv", trajectory_csv(spec, schedule, sim.trajectory));
  out << "feasible " << (sim.feasibility.feasible() ? "true" : "false") << '\n';
  for (const BandViolation& v : sim.feasibility.band) {
    out << "S_" << v.index << " = " << two_decimals(v.size) << (v.bound == Bound::kUpper ? " above s_tol" : " below s_min")
        << '\n';
  }
  for (const ScheduleViolation& v : sim.feasibility.schedule) {
    out << "period " << v.period
        << (v.fault == ScheduleFault::kSpacing         ? " violates spacing"
            : v.fault == ScheduleFault::kForcedMissing ? " is forced but untreated"
                                                       : " names an unknown treatment")
        << '\n';
  }
  return kExitOk;
}

int cmd_export_lp(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Program program = program_of(cfg);
  const Objective objective = objective_of(cfg);
  const ProblemSpec spec = load(cfg, err);
  const MilpModel model = build(spec, program, objective);
  const fs::path dir = output_dir(cfg);
  write_file(dir / "model.lp", export_lp(model));
  out << "model " << model.label << ": " << model.count(VarKind::kBinary) << " binaries, "
      << model.count(VarKind::kContinuous) << " continuous, " << model.constraints.size() << " rows\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Program program = program_of(cfg);
  if (cfg.budgets.empty()) throw UsageError("sweep requires --budgets");
  const std::vector<double> budgets = parse_budgets(cfg.budgets);
  const ProblemSpec spec = load(cfg, err);
  const std::vector<SweepEntry> entries = sweep_budget(spec, program, budgets, cfg.threads);
  const fs::path dir = output_dir(cfg);
  const std::string csv = sweep_csv(entries);
  write_file(dir / "sweep.csv", csv);
  out << csv;
  return kExitOk;
}

int cmd_reproduce(const RunConfig& cfg, std::ostream& out) {
  ResultsTable table;
  try {
    table = parse_results_table(cfg.table);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const Reproduction result = reproduce(table, cfg.threads);
  out << format_reproduction(result);
  return result.pass() ? kExitOk : kExitFailure;
}

// Randomized comparison of the label solver against exhaustive enumeration.
int cmd_oracle_check(const RunConfig& cfg, std::ostream& out) {
  std::mt19937_64 rng(cfg.seed);
  int mismatches = 0;
  int feasible = 0;
  for (int i = 0; i < cfg.count; ++i) {
    const ProblemSpec spec = random_instance(rng);
    std::vector<Objective> objectives{Objective::min_cost()};
    const SolveReport cost_ref = brute_force(spec, objectives.front());
    if (cost_ref.status == SolveStatus::kOptimal) {
      ++feasible;
      objectives.push_back(Objective::min_max_size(cost_ref.cost + spec.treatments.front().cost));
    }
    for (const Objective& objective : objectives) {
      const SolveReport ref = objective.tracks_max() ? brute_force(spec, objective) : cost_ref;
      const SolveReport got = solve_spec(spec, objective);
      const bool same_status = ref.status == got.status;
      const bool same_value = ref.status != SolveStatus::kOptimal ||
                              std::abs(ref.objective_value - got.objective_value) <=
                                  1e-9 * std::max(1.0, std::abs(ref.objective_value));
      if (!same_status || !same_value) {
        ++mismatches;
        out << "mismatch on instance " << i << " (" << (objective.tracks_max() ? "min-max" : "min-cost")
            << "): oracle " << ref.objective_value << ", solver " << got.objective_value << '\n';
        out << spec_to_json(spec);
      }
    }
  }
  out << cfg.count << " instances (" << feasible << " feasible), seed " << cfg.seed << ", " << mismatches
      << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitFailure;
}

void add_spec_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--spec", cfg.spec_path, "Problem spec (JSON)");
  cmd->add_flag("--floor-mode", cfg.floor_mode, "Clamp decay at s_min instead of forbidding it");
  cmd->add_option("--include-terminal", cfg.include_terminal, "Band-check and track S_{K+1}")
      ->check(CLI::IsMember({"true", "false"}));
  cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
}

void add_program_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--program", cfg.program, "p1 | p2 | p3")->capture_default_str();
  cmd->add_option("--objective", cfg.objective, "min-cost | min-max")
      ->check(CLI::IsMember({"min-cost", "min-max"}))
      ->capture_default_str();
  cmd->add_option("--budget", cfg.budget, "Cost budget C for min-max");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact treatment scheduling under power-law tumor growth", "chemosched"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a program and write report.json and trajectory.csv");
  add_spec_options(solve_cmd, cfg);
  add_program_options(solve_cmd, cfg);

  CLI::App* heuristic_cmd = app.add_subcommand("heuristic", "Run the threshold heuristic");
  add_spec_options(heuristic_cmd, cfg);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Simulate a given schedule");
  add_spec_options(simulate_cmd, cfg);
  simulate_cmd->add_option("--schedule", cfg.schedule, "Treated periods, e.g. 1,3,5 or 3:2 for menu entry 2");

  CLI::App* export_cmd = app.add_subcommand("export-lp", "Write the MILP model as an LP file");
  add_spec_options(export_cmd, cfg);
  add_program_options(export_cmd, cfg);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Min-max solves over a list of budgets");
  add_spec_options(sweep_cmd, cfg);
  sweep_cmd->add_option("--program", cfg.program, "p1 | p2 | p3")->capture_default_str();
  sweep_cmd->add_option("--budgets", cfg.budgets, "C1,C2,... or FROM:TO:STEP");
  sweep_cmd->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");

  CLI::App* reproduce_cmd = app.add_subcommand("reproduce", "Re-run a published results table");
  reproduce_cmd->add_option("table", cfg.table, "table2 | table4")->required();
  reproduce_cmd->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");

  CLI::App* oracle_cmd = app.add_subcommand("oracle-check", "Compare the solver with brute force on random instances");
  oracle_cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  oracle_cmd->add_option("--count", cfg.count, "Number of instances")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(cfg, out, err);
    if (heuristic_cmd->parsed()) return cmd_heuristic(cfg, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out, err);
    if (export_cmd->parsed()) return cmd_export_lp(cfg, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out, err);
    if (reproduce_cmd->parsed()) return cmd_reproduce(cfg, out);
    if (oracle_cmd->parsed()) return cmd_oracle_check(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kExitUsage;
}

}  // namespace chemosched::cli
