#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace spillplan {

enum class Command { Validate, Solve, Explain, Trace };
enum class OutputFormat { Text, Machine };
enum class SolverChoice { Staged, Brute, Both };

struct RunConfig {
  Command command = Command::Validate;
  std::filesystem::path scenario_path;
  std::filesystem::path output_dir = ".";
  OutputFormat format = OutputFormat::Text;
  SolverChoice solver = SolverChoice::Staged;
  std::string policy;
  std::optional<int> observe_at;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitDegenerate = 2;

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_explain(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv and dispatches; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spillplan
