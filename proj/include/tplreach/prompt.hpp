#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "tplreach/context.hpp"

namespace tplreach {

/// BL1: direct caller only. BL2: call path and every hop. Full: BL2 plus
/// entry-point instantiation material and retry feedback.
enum class PromptMode { BL1, BL2, Full };

std::string_view to_string(PromptMode mode);
std::optional<PromptMode> parse_prompt_mode(std::string_view text);

inline constexpr std::array<std::string_view, 3> kScenarioInstructions = {
    "Do not include any assertions: the scenario only has to execute the call path.",
    "Do not modify existing methods: no overriding, no subclasses of project classes, no anonymous "
    "inner classes.",
    "Minimize mocking: mocks may create call paths that cannot happen in real executions.",
};

struct PromptConfig {
  PromptMode mode = PromptMode::Full;
  int max_attempts = 5;
  std::size_t max_prompt_chars = 32000;

  bool feedback_enabled() const { return mode == PromptMode::Full; }
  // Baselines are single-shot; only the full configuration retries.
  int attempt_budget() const { return feedback_enabled() ? max_attempts : 1; }
};

/// Deterministic prompt for one target. When the text would exceed
/// `max_prompt_chars`, the longest snippet is cut in half repeatedly until it
/// fits or nothing is left to cut. Feedback is only rendered in Full mode.
std::string build_prompt(const ContextBundle& bundle, const PromptConfig& config,
                         const std::optional<std::string>& feedback = std::nullopt);

}  // namespace tplreach
