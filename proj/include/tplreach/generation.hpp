#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tplreach/adapter.hpp"
#include "tplreach/callgraph.hpp"
#include "tplreach/context.hpp"
#include "tplreach/coverage.hpp"
#include "tplreach/llm.hpp"
#include "tplreach/prompt.hpp"
#include "tplreach/validation.hpp"

namespace tplreach {

struct AttemptRecord {
  int index = 1;
  bool static_validation = false;
  bool compiled = false;
  bool executed = false;
  bool target_reached = false;
  std::string scenario_path;  // relative to the output directory
  std::vector<std::string> violations;
  std::optional<std::string> feedback;  // what the next attempt is told

  bool operator==(const AttemptRecord&) const = default;
};

/// `aborted` covers provider and adapter failures.
enum class OutcomeStatus { Reached, Exhausted, SkippedDuplicate, Aborted };
std::string_view to_string(OutcomeStatus s);
std::optional<OutcomeStatus> parse_outcome_status(std::string_view text);

struct FinalScenario {
  std::string path;  // relative to the output directory
  std::string coverage_path;
  int attempt = 1;

  bool operator==(const FinalScenario&) const = default;
};

struct ScenarioOutcome {
  CallPath path;
  OutcomeStatus status = OutcomeStatus::Exhausted;
  std::vector<AttemptRecord> attempts;
  std::optional<FinalScenario> final_scenario;
  std::string error;

  TargetKey target() const { return path.key(); }
  bool operator==(const ScenarioOutcome&) const = default;
};

struct GenerationSettings {
  PromptConfig prompt;
  std::string output_dir;
  std::string scenario_subdir = "scenarios";  // relative to output_dir
  std::string project_root;  // passed through to the adapter
  int workers = 1;
  /// Empty means default_rules() restricted to the path's classes.
  std::vector<ValidationRule> rules;
};

std::string feedback_from_validation(const ValidationResult& result);

/// Compile or runtime failure: the error-level diagnostics verbatim. A run
/// that executed but missed the target: the divergence rendering.
std::string feedback_from_adapter(const AdapterResponse& response,
                                  const std::optional<DivergenceReport>& divergence = std::nullopt);

/// Prompt, generate, validate, compile, run, check coverage; repeat until the
/// target line is covered or the attempt budget is spent.
ScenarioOutcome generate_for_target(const ProjectModel& model, const ContextBundle& bundle,
                                    const GenerationSettings& settings, LlmProvider& llm,
                                    ExecutionAdapter& adapter);

struct QueueResult {
  std::vector<ScenarioOutcome> outcomes;  // queue order
  /// iteration_successes[k-1] = distinct call sites reached within k attempts.
  std::vector<int> iteration_successes;
};

/// Sorts `paths` into queue order, keeps those whose key is in `uncovered`
/// and runs them. Once a call site is reached, its remaining paths become
/// skipped_duplicate without touching the provider. Paths for one call site
/// always run on the same worker, in order.
QueueResult run_generation_queue(const ProjectModel& model, std::vector<CallPath> paths,
                                 const std::set<TargetKey>& uncovered, const GenerationSettings& settings,
                                 LlmProvider& llm, ExecutionAdapter& adapter);

std::vector<int> cumulative_successes(const std::vector<ScenarioOutcome>& outcomes, int max_attempts);

nlohmann::json path_to_json(const CallPath& path);
CallPath path_from_json(const nlohmann::json& doc);
nlohmann::json outcome_to_json(const ScenarioOutcome& outcome);
ScenarioOutcome outcome_from_json(const nlohmann::json& doc);

}  // namespace tplreach
