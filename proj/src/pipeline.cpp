#include "tplreach/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "tplreach/adapter.hpp"
#include "tplreach/callgraph.hpp"
#include "tplreach/coverage.hpp"
#include "tplreach/fixture_adapter.hpp"
#include "tplreach/generation.hpp"
#include "tplreach/hierarchy.hpp"
#include "tplreach/metrics.hpp"
#include "tplreach/model_json.hpp"
#include "tplreach/triage.hpp"

namespace tplreach {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_artifact(const fs::path& path) {
  if (!fs::exists(path)) throw UsageError("missing artifact " + path.string() + " (run the earlier commands first)");
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw UsageError("corrupt artifact " + path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

ProjectModel load_model(const RunConfig& config) {
  if (config.model_path.empty()) throw UsageError("--model is required");
  if (!fs::exists(config.model_path)) throw UsageError("model file not found: " + config.model_path);
  return load_model_file(config.model_path);
}

json site_json(const CallSiteRef& s) { return {{"caller", s.caller}, {"index", s.index}, {"line", s.line}}; }

TargetKey key_json(const json& doc) {
  return {doc.at("direct_caller").get<std::string>(), doc.at("tpl_method").get<std::string>()};
}

struct Inventory {
  std::string project_id;
  std::vector<CallPath> paths;
  std::set<TargetKey> reachable;
};

Inventory load_inventory(const fs::path& out) {
  auto doc = read_artifact(out / "inventory.json");
  Inventory inv;
  inv.project_id = doc.at("project_id").get<std::string>();
  for (const auto& p : doc.at("paths")) inv.paths.push_back(path_from_json(p));
  for (const auto& t : doc.at("targets"))
    if (t.at("reachable").get<bool>()) inv.reachable.insert(key_json(t));
  return inv;
}

std::set<TargetKey> load_test_covered(const fs::path& out) {
  auto doc = read_artifact(out / "coverage.json");
  std::set<TargetKey> covered;
  for (const auto& t : doc.at("targets"))
    if (t.at("covered").get<bool>()) covered.insert(key_json(t));
  return covered;
}

std::optional<std::vector<ScenarioOutcome>> load_outcomes(const fs::path& file) {
  if (!fs::exists(file)) return std::nullopt;
  auto doc = read_artifact(file);
  std::vector<ScenarioOutcome> outcomes;
  for (const auto& o : doc.at("outcomes")) outcomes.push_back(outcome_from_json(o));
  return outcomes;
}

MetricsReport metrics_from_artifacts(const fs::path& out, int max_attempts) {
  auto inv = load_inventory(out);
  MetricsInputs in;
  in.project_id = inv.project_id;
  in.reachable = inv.reachable;
  in.test_covered = load_test_covered(out);
  in.max_attempts = max_attempts;
  if (auto full = out / outcomes_file_name(PromptMode::Full); fs::exists(full)) {
    auto doc = read_artifact(full);
    in.max_attempts = doc.at("max_attempts").get<int>();
    for (const auto& o : doc.at("outcomes")) in.outcomes.push_back(outcome_from_json(o));
  }
  in.bl1_outcomes = load_outcomes(out / outcomes_file_name(PromptMode::BL1));
  in.bl2_outcomes = load_outcomes(out / outcomes_file_name(PromptMode::BL2));
  return compute_metrics(in);
}

}  // namespace

std::string outcomes_file_name(PromptMode mode) {
  return mode == PromptMode::Full ? "outcomes.json" : "outcomes." + std::string(to_string(mode)) + ".json";
}

void RunConfig::validate() const {
  if (max_attempts < 1) throw UsageError("max_attempts must be at least 1");
  if (workers < 1) throw UsageError("workers must be at least 1");
  if (max_prompt_chars == 0) throw UsageError("max_prompt_chars must be positive");
  if (output_dir.empty()) throw UsageError("--out must not be empty");
}

void apply_config_json(RunConfig& c, const json& doc) {
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  auto str = [](const json& v, const std::string& key) {
    if (!v.is_string()) throw UsageError("config key '" + key + "' must be a string");
    return v.get<std::string>();
  };
  auto num = [](const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
    return v.get<long long>();
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "model") {
      c.model_path = str(v, key);
    } else if (key == "out") {
      c.output_dir = str(v, key);
    } else if (key == "coverage") {
      if (!v.is_array()) throw UsageError("config key 'coverage' must be an array");
      c.coverage_paths.clear();
      for (const auto& p : v) c.coverage_paths.push_back(str(p, key));
    } else if (key == "mode") {
      auto m = parse_prompt_mode(str(v, key));
      if (!m) throw UsageError("unknown prompt mode " + v.dump());
      c.mode = *m;
    } else if (key == "max_attempts") {
      c.max_attempts = static_cast<int>(num(v, key));
    } else if (key == "workers") {
      c.workers = static_cast<int>(num(v, key));
    } else if (key == "llm") {
      c.llm = str(v, key);
    } else if (key == "llm_base_url") {
      c.http.base_url = str(v, key);
    } else if (key == "llm_model") {
      c.http.model = str(v, key);
    } else if (key == "api_key_env") {
      c.http.api_key_env = str(v, key);
    } else if (key == "adapter") {
      c.adapter_command = str(v, key);
    } else if (key == "rules") {
      c.rules_path = str(v, key);
    } else if (key == "project_root") {
      c.project_root = str(v, key);
    } else if (key == "max_prompt_chars") {
      auto n = num(v, key);
      if (n <= 0) throw UsageError("max_prompt_chars must be positive");
      c.max_prompt_chars = static_cast<std::size_t>(n);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
}

int cmd_analyze(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto model = load_model(config);
  const auto graph = build_cha(model);
  const auto paths = enumerate_paths(model, graph);
  const fs::path out = config.output_dir;

  std::set<TargetKey> reachable;
  for (const auto& p : paths) reachable.insert(p.key());

  json sites = json::array();
  for (const auto& s : tpl_call_sites(model))
    sites.push_back({{"caller", s.site.caller},
                     {"index", s.index},
                     {"line", s.site.line},
                     {"targets", s.targets},
                     {"tpl_targets", s.tpl_targets}});
  json targets = json::array();
  for (const auto& t : tpl_targets(model))
    targets.push_back({{"direct_caller", t.key.direct_caller},
                       {"tpl_method", t.key.tpl_method},
                       {"site", site_json(t.site)},
                       {"reachable", reachable.contains(t.key)}});
  json path_rows = json::array();
  for (const auto& p : paths) path_rows.push_back(path_to_json(p));

  write_json(out / "inventory.json", {{"project_id", model.project_id()},
                                      {"call_sites", sites},
                                      {"targets", targets},
                                      {"paths", path_rows},
                                      {"warnings", graph.warnings}});
  write_text(out / "callgraph.txt", dump_edges(graph));
  for (const auto& w : graph.warnings) log << "warning: " << w << "\n";
  log << "analyze: " << targets.size() << " tpl call sites, " << reachable.size() << " reachable, " << paths.size()
      << " paths\n";
  return 0;
}

int cmd_coverage(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto model = load_model(config);
  const fs::path out = config.output_dir;
  auto inventory = read_artifact(out / "inventory.json");

  CoverageMap merged(Provenance::DeveloperTests);
  for (const auto& path : config.coverage_paths) {
    if (!fs::exists(path)) throw UsageError("coverage file not found: " + path);
    merged = merged.merged(parse_lcov(read_text(path), Provenance::DeveloperTests));
  }

  json targets = json::array();
  int covered = 0;
  int reachable = 0;
  for (const auto& t : inventory.at("targets")) {
    const auto& s = t.at("site");
    CallSiteRef site{s.at("caller").get<std::string>(), s.at("index").get<std::size_t>(), s.at("line").get<int>()};
    const bool hit = site_covered(merged, site, model);
    const bool is_reachable = t.at("reachable").get<bool>();
    if (is_reachable) {
      ++reachable;
      covered += hit ? 1 : 0;
    }
    targets.push_back({{"direct_caller", t.at("direct_caller")},
                       {"tpl_method", t.at("tpl_method")},
                       {"site", s},
                       {"reachable", is_reachable},
                       {"covered", hit},
                       {"evidence", std::string(to_string(Provenance::DeveloperTests))}});
  }
  write_json(out / "coverage.json",
             {{"sources", config.coverage_paths},
              {"targets", targets},
              {"summary", {{"covered", covered}, {"total", reachable}, {"text", format_fraction(covered, reachable)}}}});
  write_text(out / "coverage.lcov", to_lcov(merged));
  log << "coverage: " << format_fraction(covered, reachable) << " reachable call sites covered by tests\n";
  return 0;
}

int cmd_generate(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto model = load_model(config);
  const fs::path out = config.output_dir;
  const auto inventory = load_inventory(out);
  const auto tested = load_test_covered(out);

  std::set<TargetKey> uncovered;
  for (const auto& k : inventory.reachable)
    if (!tested.contains(k)) uncovered.insert(k);

  std::unique_ptr<LlmProvider> llm;
  try {
    llm = make_provider(config.llm, config.http);
  } catch (const ProviderError& e) {
    throw UsageError(e.what());
  }
  std::unique_ptr<ExecutionAdapter> adapter;
  if (config.adapter_command == "builtin:fixture")
    adapter = std::make_unique<FixtureAdapter>(model);
  else
    adapter = std::make_unique<ProcessAdapter>(config.adapter_command);

  GenerationSettings settings;
  settings.prompt.mode = config.mode;
  settings.prompt.max_attempts = config.max_attempts;
  settings.prompt.max_prompt_chars = config.max_prompt_chars;
  settings.output_dir = out.string();
  settings.scenario_subdir =
      config.mode == PromptMode::Full ? "scenarios" : "scenarios-" + std::string(to_string(config.mode));
  settings.project_root = config.project_root;
  settings.workers = config.workers;

  auto result = run_generation_queue(model, inventory.paths, uncovered, settings, *llm, *adapter);

  json rows = json::array();
  int reached = 0, aborted = 0;
  for (const auto& o : result.outcomes) {
    rows.push_back(outcome_to_json(o));
    reached += o.status == OutcomeStatus::Reached;
    aborted += o.status == OutcomeStatus::Aborted;
    if (o.status == OutcomeStatus::Aborted) log << "aborted " << target_slug(o.target()) << ": " << o.error << "\n";
  }
  write_json(out / outcomes_file_name(config.mode), {{"mode", std::string(to_string(config.mode))},
                                                     {"max_attempts", config.max_attempts},
                                                     {"iteration_successes", result.iteration_successes},
                                                     {"outcomes", rows}});
  if (config.mode == PromptMode::Full || fs::exists(out / outcomes_file_name(PromptMode::Full)))
    write_json(out / "metrics.json", metrics_to_json(metrics_from_artifacts(out, config.max_attempts)));

  log << "generate (" << to_string(config.mode) << "): " << result.outcomes.size() << " queued, " << reached
      << " reached, " << aborted << " aborted\n";
  return !result.outcomes.empty() && aborted == static_cast<int>(result.outcomes.size()) ? 1 : 0;
}

int cmd_triage(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (!config.rules_path) throw UsageError("--rules is required for triage");
  if (!fs::exists(*config.rules_path)) throw UsageError("rules file not found: " + *config.rules_path);
  const auto rules = parse_rules_json(read_text(*config.rules_path));
  const auto model = load_model(config);
  const fs::path out = config.output_dir;
  const auto sites = tpl_call_sites(model);

  std::vector<EvidenceSource> evidence;
  if (fs::exists(out / "coverage.lcov"))
    evidence.push_back({"developer tests", parse_lcov(read_text(out / "coverage.lcov"), Provenance::DeveloperTests)});
  if (auto outcomes = load_outcomes(out / outcomes_file_name(PromptMode::Full))) {
    for (const auto& o : *outcomes) {
      if (o.status != OutcomeStatus::Reached || !o.final_scenario) continue;
      evidence.push_back({o.final_scenario->path,
                          parse_lcov(read_text(out / o.final_scenario->coverage_path), Provenance::ScenarioRun)});
    }
  }

  std::vector<TriageResult> results;
  for (const auto& rule : rules)
    results.push_back(augment(rule, classify_rule(rule, model, sites), model, sites, evidence));
  write_json(out / "triage.json", triage_to_json(results));
  write_text(out / "triage.csv", triage_table_csv(triage_table(results)));
  int present = 0, executable = 0;
  for (const auto& r : results) {
    present += r.call_site_present;
    executable += r.executable;
  }
  log << "triage: " << results.size() << " rules, " << present << " with call sites, " << executable
      << " executable\n";
  return 0;
}

int cmd_report(const RunConfig& config, std::ostream& log) {
  config.validate();
  const fs::path out = config.output_dir;
  const auto metrics = metrics_from_artifacts(out, config.max_attempts);
  json report = {{"metrics", metrics_to_json(metrics)}, {"rq5", nullptr}};
  write_text(out / "rq123.csv", rq123_csv(metrics));
  write_text(out / "rq3paths.csv", rq3paths_csv(metrics));
  if (fs::exists(out / "triage.json")) {
    const auto table = triage_table(triage_from_json(read_artifact(out / "triage.json")));
    write_text(out / "rq5.csv", triage_table_csv(table));
    json rows = json::array();
    for (const auto& r : table)
      rows.push_back({{"module", r.module},
                      {"strong", {r.strong, r.strong_present, r.strong_exec}},
                      {"loose", {r.loose, r.loose_present, r.loose_exec}},
                      {"undetermined", {r.undetermined, r.undetermined_present, r.undetermined_exec}}});
    report["rq5"] = rows;
  }
  write_json(out / "report.json", report);
  log << "report: total guarantees " << format_fraction(metrics.total_guarantees, metrics.tpl_call_sites) << "\n";
  return 0;
}

}  // namespace tplreach
