#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tplreach/llm.hpp"
#include "tplreach/prompt.hpp"

namespace tplreach {

/// Bad configuration or a missing/invalid input artifact; the CLI maps it to
/// exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model_path;
  std::vector<std::string> coverage_paths;
  std::string output_dir = "out";
  PromptMode mode = PromptMode::Full;
  int max_attempts = 5;
  int workers = 1;
  std::string llm = "mock:responses";  // mock:<dir> or http
  HttpProviderSettings http;
  /// Shell command speaking the adapter protocol, or `builtin:fixture` for the
  /// in-process fixture adapter.
  std::string adapter_command = "builtin:fixture";
  std::optional<std::string> rules_path;
  std::string project_root = ".";
  std::size_t max_prompt_chars = 32000;

  /// Throws UsageError when a bound is violated.
  void validate() const;
};

/// Applies keys of a JSON config object onto `config`. Unknown keys are
/// rejected. Throws UsageError.
void apply_config_json(RunConfig& config, const nlohmann::json& doc);

/// Each command writes its artifacts into `output_dir` and returns the
/// process exit code: 0 on success, 1 when every generation target aborted.
/// Model, format and rule errors surface as exceptions (ModelError,
/// ParseError, FormatError, RuleError, BadGlob, UsageError).
int cmd_analyze(const RunConfig& config, std::ostream& log);
int cmd_coverage(const RunConfig& config, std::ostream& log);
int cmd_generate(const RunConfig& config, std::ostream& log);
int cmd_triage(const RunConfig& config, std::ostream& log);
int cmd_report(const RunConfig& config, std::ostream& log);

/// Artifact name for a prompt mode: outcomes.json for the full
/// configuration, outcomes.BL1.json / outcomes.BL2.json for the baselines.
std::string outcomes_file_name(PromptMode mode);

}  // namespace tplreach
