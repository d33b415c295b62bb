#include "spillplan/cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "spillplan/backbone.hpp"
#include "spillplan/report.hpp"
#include "spillplan/scenario.hpp"
#include "spillplan/solver.hpp"
#include "spillplan/trajectory.hpp"

namespace spillplan {

namespace {

struct Loaded {
  Scenario scenario;
  DecisionBackbone backbone;
};

// Loads the scenario and builds the backbone; prints the error and
// returns nullopt on input problems.
std::optional<Loaded> load(const RunConfig& cfg, std::ostream& err, bool with_backbone = true) {
  try {
    Loaded l{load_scenario(cfg.scenario_path), {}};
    if (with_backbone) l.backbone = build_backbone(l.scenario);
    return l;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const BackboneError& e) {
    err << "error: " << e.what() << "\n";
  }
  return std::nullopt;
}

bool write_file(const std::filesystem::path& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  f << content;
  return static_cast<bool>(f);
}

std::string summary_line(const SolveResult& r) {
  return fmt::format("optimal policy: {}  value: {:.4f}", r.policy_label, r.value);
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto l = load(cfg, err, false);
  if (!l) return kExitInput;
  out << fmt::format("ok: {} sectors, {} booms, horizon {}\n", l->scenario.sector_count(),
                     l->scenario.inventory.booms.size(), l->scenario.horizon);
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.solver == SolverChoice::Both && cfg.format != OutputFormat::Machine) {
    err << "error: --solver both requires --format machine\n";
    return kExitInput;
  }
  auto l = load(cfg, err);
  if (!l) return kExitInput;

  std::optional<SolveResult> brute, staged;
  try {
    if (cfg.solver != SolverChoice::Staged) brute = brute_force(l->scenario, l->backbone);
    if (cfg.solver != SolverChoice::Brute) staged = backward_induct(l->scenario, l->backbone);
  } catch (const DegenerateScenario& e) {
    err << "error: " << e.what() << "\n";
    return kExitDegenerate;
  }
  const SolveResult& primary = staged ? *staged : *brute;

  nlohmann::ordered_json record;
  std::string summary = summary_line(primary);
  if (brute && staged) {
    const bool same = brute->optimal_policy == staged->optimal_policy;
    record["comparison"] = {
        {"argmin_identical", same},
        {"brute_policy", brute->policy_label},
        {"staged_policy", staged->policy_label},
        {"value_delta", std::abs(brute->value - staged->value)},
        {"evaluations",
         {{"bruteforce", brute->evaluations_bruteforce}, {"staged", staged->evaluations_staged}}}};
    record["brute"] = to_json(*brute);
    record["staged"] = to_json(*staged);
    summary += fmt::format("  ({} vs {} evaluations, argmin {})", brute->evaluations_bruteforce,
                           staged->evaluations_staged, same ? "identical" : "DIFFERS");
  } else {
    record = to_json(primary);
    summary += fmt::format("  ({} evaluations, {})",
                           staged ? staged->evaluations_staged : brute->evaluations_bruteforce,
                           primary.method);
  }

  std::string tables;
  for (const auto& t : primary.stage_tables) tables += render_table(t) + "\n";

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    err << "error: cannot create " << cfg.output_dir.string() << ": " << ec.message() << "\n";
    return kExitInput;
  }
  const auto json_text = record.dump(2) + "\n";
  if (!write_file(cfg.output_dir / "solve_result.json", json_text, err) ||
      !write_file(cfg.output_dir / "table_stage2.txt", render_table(primary.stage_tables[0]), err) ||
      !write_file(cfg.output_dir / "table_stage1.txt", render_table(primary.stage_tables[1]), err)) {
    return kExitInput;
  }

  if (cfg.format == OutputFormat::Machine) {
    out << json_text;
  } else {
    out << summary << "\n\n" << tables;
  }
  return kExitOk;
}

int cmd_explain(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto l = load(cfg, err);
  if (!l) return kExitInput;
  out << render_backbone(l->scenario, l->backbone);
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto l = load(cfg, err);
  if (!l) return kExitInput;
  const auto& s = l->scenario;
  const auto policy = parse_policy(l->backbone, cfg.policy);
  if (!policy) {
    err << "error: unknown policy '" << cfg.policy << "'; valid names:\n";
    for (const auto& n : policy_names(l->backbone)) err << "  " << n << "\n";
    return kExitInput;
  }
  if (cfg.observe_at && (*cfg.observe_at < 0 || *cfg.observe_at >= s.horizon)) {
    err << fmt::format("error: --observe-at must be in [0, {})\n", s.horizon);
    return kExitInput;
  }
  const auto d =
      plan_deployment(l->backbone, policy->first, policy->aircraft, policy->second.front());
  const auto transitions = build_transitions(s);

  std::map<std::string, TrajectoryTrace> traces;
  traces["blind"] = run_trajectory(s, transitions, d, std::nullopt);
  if (cfg.observe_at) traces["observed"] = run_trajectory(s, transitions, d, cfg.observe_at);

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    err << "error: cannot create " << cfg.output_dir.string() << ": " << ec.message() << "\n";
    return kExitInput;
  }
  for (const auto& [mode, trace] : traces) {
    std::ostringstream csv;
    write_trace_csv(s, trace, csv);
    const auto path = cfg.output_dir / fmt::format("trace_{}_{}.csv", cfg.policy, mode);
    if (!write_file(path, csv.str(), err)) return kExitInput;
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"spillplan: oil spill response planning under trajectory uncertainty"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("file", cfg.scenario_path, "Scenario JSON")->required();

  std::string solver = "staged", format = "text";
  auto* solve_cmd = app.add_subcommand("solve", "Find the optimal response policy");
  solve_cmd->add_option("file", cfg.scenario_path, "Scenario JSON")->required();
  solve_cmd->add_option("--solver", solver, "staged|brute|both")
      ->check(CLI::IsMember({"staged", "brute", "both"}));
  solve_cmd->add_option("--out", cfg.output_dir, "Artifact directory");
  solve_cmd->add_option("--format", format, "text|machine")
      ->check(CLI::IsMember({"text", "machine"}));

  auto* explain_cmd = app.add_subcommand("explain", "Print the decision backbone");
  explain_cmd->add_option("file", cfg.scenario_path, "Scenario JSON")->required();

  int observe_at = -1;
  auto* trace_cmd = app.add_subcommand("trace", "Export per-period oil quantities as CSV");
  trace_cmd->add_option("file", cfg.scenario_path, "Scenario JSON")->required();
  trace_cmd->add_option("--policy", cfg.policy, "Plan name, e.g. stabilize-disperse-stabilize")
      ->required();
  auto* observe_opt = trace_cmd->add_option("--observe-at", observe_at, "Observation period");
  trace_cmd->add_option("--out", cfg.output_dir, "Artifact directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  cfg.solver = solver == "brute" ? SolverChoice::Brute
               : solver == "both" ? SolverChoice::Both
                                  : SolverChoice::Staged;
  cfg.format = format == "machine" ? OutputFormat::Machine : OutputFormat::Text;
  if (observe_opt->count() > 0) cfg.observe_at = observe_at;

  if (validate_cmd->parsed()) {
    cfg.command = Command::Validate;
    return cmd_validate(cfg, out, err);
  }
  if (solve_cmd->parsed()) {
    cfg.command = Command::Solve;
    return cmd_solve(cfg, out, err);
  }
  if (explain_cmd->parsed()) {
    cfg.command = Command::Explain;
    return cmd_explain(cfg, out, err);
  }
  cfg.command = Command::Trace;
  return cmd_trace(cfg, out, err);
}

}  // namespace spillplan
