#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tplreach/coverage.hpp"
#include "tplreach/fixture_dsl.hpp"
#include "tplreach/glob.hpp"
#include "tplreach/model.hpp"
#include "tplreach/pipeline.hpp"
#include "tplreach/triage.hpp"

using namespace tplreach;

int main(int argc, char** argv) {
  CLI::App app{"Third-party call-site reachability analysis and scenario generation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, model, out, mode, llm, base_url, llm_model, api_key_env, adapter, rules, project_root;
  std::vector<std::string> coverage;
  int max_attempts = 0, workers = 0;
  std::size_t max_prompt_chars = 0;

  auto* o_config = app.add_option("--config", config_path, "JSON config file");
  auto* o_model = app.add_option("--model", model, "Code model (.json or fixture DSL)");
  auto* o_out = app.add_option("--out", out, "Artifact directory");

  auto* analyze = app.add_subcommand("analyze", "Build the call graph and the call-site inventory");
  auto* cov = app.add_subcommand("coverage", "Match developer-test coverage against call sites");
  auto* o_cov = cov->add_option("--lcov", coverage, "LCOV files (repeatable)");
  auto* generate = app.add_subcommand("generate", "Generate reachability scenarios for uncovered call sites");
  auto* o_mode = generate->add_option("--mode", mode, "BL1, BL2 or FULL");
  auto* o_attempts = generate->add_option("--max-attempts", max_attempts, "Attempt budget per target");
  auto* o_workers = generate->add_option("--workers", workers, "Concurrent targets");
  auto* o_llm = generate->add_option("--llm", llm, "mock:<dir> or http");
  auto* o_base = generate->add_option("--llm-base-url", base_url, "Chat-completion base URL");
  auto* o_lmodel = generate->add_option("--llm-model", llm_model, "Model name for the http provider");
  auto* o_keyenv = generate->add_option("--api-key-env", api_key_env, "Environment variable holding the API key");
  auto* o_adapter = generate->add_option("--adapter", adapter, "Adapter command or builtin:fixture");
  auto* o_root = generate->add_option("--project-root", project_root, "Passed to the adapter");
  auto* o_cap = generate->add_option("--max-prompt-chars", max_prompt_chars, "Prompt size cap");
  auto* triage = app.add_subcommand("triage", "Classify vulnerability rules and attach executability evidence");
  auto* o_rules = triage->add_option("--rules", rules, "Rule file (JSON array)");
  auto* report = app.add_subcommand("report", "Emit the consolidated tables");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config;
    if (o_config->count()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot read config " + config_path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
      }
      apply_config_json(config, doc);
    }
    if (o_model->count()) config.model_path = model;
    if (o_out->count()) config.output_dir = out;
    if (o_cov->count()) config.coverage_paths = coverage;
    if (o_mode->count()) {
      auto m = parse_prompt_mode(mode);
      if (!m) throw UsageError("unknown mode '" + mode + "'");
      config.mode = *m;
    }
    if (o_attempts->count()) config.max_attempts = max_attempts;
    if (o_workers->count()) config.workers = workers;
    if (o_llm->count()) config.llm = llm;
    if (o_base->count()) config.http.base_url = base_url;
    if (o_lmodel->count()) config.http.model = llm_model;
    if (o_keyenv->count()) config.http.api_key_env = api_key_env;
    if (o_adapter->count()) config.adapter_command = adapter;
    if (o_root->count()) config.project_root = project_root;
    if (o_cap->count()) config.max_prompt_chars = max_prompt_chars;
    if (o_rules->count()) config.rules_path = rules;

    if (analyze->parsed()) return cmd_analyze(config, std::cerr);
    if (cov->parsed()) return cmd_coverage(config, std::cerr);
    if (generate->parsed()) return cmd_generate(config, std::cerr);
    if (triage->parsed()) return cmd_triage(config, std::cerr);
    if (report->parsed()) return cmd_report(config, std::cerr);
  } catch (const ParseError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "coverage format error: " << e.what() << "\n";
    return 2;
  } catch (const RuleError& e) {
    std::cerr << "rule error: " << e.what() << "\n";
    return 2;
  } catch (const BadGlob& e) {
    std::cerr << "rule error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
