#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tplreach/callgraph.hpp"
#include "tplreach/context.hpp"
#include "tplreach/prompt.hpp"

using namespace tplreach;

namespace {

ContextBundle graphhopper_bundle() {
  static const auto model = testutil::graphhopper();
  return extract_context(model, enumerate_paths(model, build_cha(model)).at(0));
}

std::string prompt(PromptMode mode, std::optional<std::string> feedback = std::nullopt) {
  PromptConfig cfg;
  cfg.mode = mode;
  return build_prompt(graphhopper_bundle(), cfg, feedback);
}

bool has(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST(Prompt, ModeNamesRoundTrip) {
  for (auto m : {PromptMode::BL1, PromptMode::BL2, PromptMode::Full})
    EXPECT_EQ(parse_prompt_mode(to_string(m)), m);
  EXPECT_EQ(parse_prompt_mode("full"), PromptMode::Full);
  EXPECT_FALSE(parse_prompt_mode("BL3"));
}

TEST(Prompt, EveryModeCarriesTheInstructionsAndTarget) {
  for (auto m : {PromptMode::BL1, PromptMode::BL2, PromptMode::Full}) {
    auto p = prompt(m);
    for (auto rule : kScenarioInstructions) EXPECT_TRUE(has(p, std::string(rule)));
    EXPECT_TRUE(has(p, "com.carrotsearch.hppc.sorting.IndirectSort.mergesort(int,int,IndirectComparator)"));
    EXPECT_TRUE(has(p, "OrigGraph build() {"));
  }
}

TEST(Prompt, ContentGrowsWithMode) {
  auto bl1 = prompt(PromptMode::BL1);
  auto bl2 = prompt(PromptMode::BL2);
  auto full = prompt(PromptMode::Full);

  EXPECT_FALSE(has(bl1, "public void prepareForContraction()"));
  EXPECT_FALSE(has(bl1, "## Call path"));
  EXPECT_TRUE(has(bl2, "public void prepareForContraction()"));
  EXPECT_TRUE(has(bl2, "## Call path"));
  EXPECT_FALSE(has(bl2, "Factory method"));
  EXPECT_FALSE(has(bl2, "### Setters"));

  EXPECT_TRUE(has(full, "### Factory methods / Constructors"));
  EXPECT_TRUE(has(full, "public static CHPreparationGraph edgeBased("));
  EXPECT_TRUE(has(full, "### Setters"));
  EXPECT_TRUE(has(full, "public void addEdge(int from"));
  EXPECT_TRUE(has(full, "com.graphhopper.routing.ch.CHPreparationGraph.TurnCostFunction"));
}

TEST(Prompt, FeedbackOnlyInFullMode) {
  const std::string fb = "The scenario does not compile. Errors:\ncannot find symbol: class Foo\n";
  EXPECT_TRUE(has(prompt(PromptMode::Full, fb), "cannot find symbol: class Foo"));
  EXPECT_FALSE(has(prompt(PromptMode::BL2, fb), "cannot find symbol"));
  EXPECT_FALSE(has(prompt(PromptMode::BL1, fb), "cannot find symbol"));
  EXPECT_EQ(prompt(PromptMode::Full, std::string()), prompt(PromptMode::Full));
}

TEST(Prompt, Deterministic) {
  for (auto m : {PromptMode::BL1, PromptMode::BL2, PromptMode::Full}) EXPECT_EQ(prompt(m), prompt(m));
}

TEST(Prompt, TruncatesLongestSnippetToFit) {
  auto bundle = graphhopper_bundle();
  std::string big;
  for (int i = 0; i < 400; ++i) big += "        int filler" + std::to_string(i) + " = 0;\n";
  bundle.snippets[0].text = big;
  PromptConfig cfg;
  auto untrimmed = build_prompt(bundle, cfg);
  cfg.max_prompt_chars = untrimmed.size() / 2;
  auto trimmed = build_prompt(bundle, cfg);
  EXPECT_LE(trimmed.size(), cfg.max_prompt_chars);
  EXPECT_TRUE(has(trimmed, "more lines truncated]]"));
  EXPECT_TRUE(has(trimmed, "filler0 = 0;"));
  EXPECT_FALSE(has(trimmed, "filler399 = 0;"));
  // The short direct-caller snippet survives intact.
  EXPECT_TRUE(has(trimmed, "IndirectSort.mergesort("));
}

TEST(Prompt, StopsWhenNothingLeftToCut) {
  PromptConfig cfg;
  cfg.max_prompt_chars = 10;
  auto p = build_prompt(graphhopper_bundle(), cfg);
  EXPECT_GT(p.size(), 10u);
  EXPECT_TRUE(has(p, "Return only the complete scenario source code."));
}

TEST(Prompt, AttemptBudgetAndFeedbackSwitch) {
  PromptConfig cfg;
  cfg.max_attempts = 4;
  EXPECT_EQ(cfg.attempt_budget(), 4);
  EXPECT_TRUE(cfg.feedback_enabled());
  cfg.mode = PromptMode::BL2;
  EXPECT_EQ(cfg.attempt_budget(), 1);
  EXPECT_FALSE(cfg.feedback_enabled());
}
