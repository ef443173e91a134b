// Acceptance checks, one PASS/FAIL line per criterion.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "scripted.hpp"
#include "test_util.hpp"
#include "tplreach/callgraph.hpp"
#include "tplreach/context.hpp"
#include "tplreach/fixture_adapter.hpp"
#include "tplreach/generation.hpp"
#include "tplreach/metrics.hpp"
#include "tplreach/pipeline.hpp"
#include "tplreach/prompt.hpp"
#include "tplreach/triage.hpp"

using namespace tplreach;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) detail += (ok ? "" : "; ") + what;
    ok = ok && cond;
  }
};

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ")";
  return out.str();
}

Check cha_oracle() {
  Check c;
  oracle::Rng rng(20240601);
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 200 && c.ok; ++i) {
    auto data = oracle::random_hierarchy(rng, 10, 20);
    std::set<oracle::Edge> actual;
    for (const auto& e : build_cha(ProjectModel::create(data)).edges) actual.insert({e.from, e.to, e.line, e.site.index});
    c.expect(actual == oracle::brute_force_edges(data), "edge sets differ on hierarchy " + std::to_string(i));
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (c.ok) c.detail = "200 hierarchies in " + std::to_string(secs).substr(0, 5) + " s";
  return c;
}

Check shortest_path_oracle() {
  Check c;
  oracle::Rng rng(8128);
  int with_path = 0;
  for (int i = 0; i < 200 && c.ok; ++i) {
    auto g = oracle::random_call_graph(rng, 8);
    auto model = ProjectModel::create(g.model);
    auto targets = tpl_targets(model);
    c.expect(targets.size() == 1, "expected one target");
    if (!c.ok) break;
    auto path = find_entry_path(build_cha(model), targets[0]);
    auto expected = oracle::min_entry_path_length(g);
    std::size_t actual = path ? path->length : 0;
    c.expect(actual == expected, "graph " + std::to_string(i) + ": got " + std::to_string(actual) + ", oracle " +
                                     std::to_string(expected));
    with_path += expected > 0;
  }
  if (c.ok) c.detail = "200 graphs, " + std::to_string(with_path) + " with an entry path";
  return c;
}

Check sort_example() {
  Check c;
  auto model = testutil::graphhopper();
  auto paths = enumerate_paths(model, build_cha(model));
  c.expect(paths.size() == 1, "expected exactly one path, got " + std::to_string(paths.size()));
  if (!c.ok) return c;
  c.expect(paths[0].length == 2, "path length " + std::to_string(paths[0].length));
  auto bundle = extract_context(model, paths[0]);
  c.expect(bundle.entry.factories.size() == 1 &&
               bundle.entry.factories[0].find("CHPreparationGraph edgeBased(") != std::string::npos,
           "factory snippet missing");
  c.expect(bundle.entry.setters.size() == 1 && bundle.entry.setters[0].find("void addEdge(") != std::string::npos,
           "setter snippet missing");

  auto dir = testutil::temp_dir("acc3");
  GenerationSettings settings;
  settings.output_dir = dir.string();
  MockProvider llm(testutil::fixture("graphhopper/responses"));
  FixtureAdapter adapter(model);
  auto result = run_generation_queue(model, paths, {paths[0].key()}, settings, llm, adapter);
  c.expect(result.outcomes.size() == 1 && result.outcomes[0].status == OutcomeStatus::Reached,
           "outcome not reached");
  c.expect(!result.outcomes.empty() && result.outcomes[0].attempts.size() == 1, "more than one attempt");
  fs::remove_all(dir);
  if (c.ok) c.detail = "1 path of length 2, reached in 1 attempt";
  return c;
}

Check loop_bound_and_ablation() {
  Check c;
  const std::vector<int> success_at = {1, 2, 2, 5, 0};  // 0: never
  auto model = ProjectModel::create(scripted::chain_targets(5));
  auto paths = enumerate_paths(model, build_cha(model));
  std::set<TargetKey> keys;
  for (const auto& p : paths) keys.insert(p.key());
  std::map<std::string, int> index;
  for (int i = 0; i < 5; ++i) index[target_slug({"app.T" + std::to_string(i) + ".d()", "lib.L.go()"})] = i;
  scripted::Provider llm([&](const std::string& slug, int attempt) {
    int s = success_at[static_cast<std::size_t>(index.at(slug))];
    return s != 0 && attempt >= s ? scripted::reach_marker(index.at(slug)) : std::string("COMPILE_ERROR nope\n");
  });
  scripted::Adapter adapter;
  auto dir = testutil::temp_dir("acc4");
  GenerationSettings settings;
  settings.output_dir = dir.string();
  settings.prompt.max_attempts = 5;
  auto result = run_generation_queue(model, paths, keys, settings, llm, adapter);

  const std::vector<int> expected = {1, 3, 3, 4, 4};
  c.expect(result.iteration_successes == expected,
           "I1..I5 = " + join(result.iteration_successes) + ", expected " + join(expected));
  int exhausted = 0;
  for (const auto& o : result.outcomes)
    if (o.status == OutcomeStatus::Exhausted) {
      ++exhausted;
      c.expect(o.attempts.size() == 5, "exhausted after " + std::to_string(o.attempts.size()) + " attempts");
    }
  c.expect(exhausted == 1, std::to_string(exhausted) + " exhausted outcomes");

  // Information content of the three prompt configurations.
  auto gh = testutil::graphhopper();
  auto bundle = extract_context(gh, enumerate_paths(gh, build_cha(gh)).at(0));
  std::map<PromptMode, std::string> prompts;
  for (auto m : {PromptMode::BL1, PromptMode::BL2, PromptMode::Full}) {
    PromptConfig cfg;
    cfg.mode = m;
    prompts[m] = build_prompt(bundle, cfg);
  }
  std::vector<std::string> bl1_blocks = {bundle.snippets.back().text};
  std::vector<std::string> bl2_blocks = bl1_blocks;
  for (const auto& s : bundle.snippets) bl2_blocks.push_back(s.text);
  std::vector<std::string> full_blocks = bl2_blocks;
  for (const auto* group : {&bundle.entry.factories, &bundle.entry.setters, &bundle.entry.imports})
    full_blocks.insert(full_blocks.end(), group->begin(), group->end());
  auto contains_all = [](const std::string& p, const std::vector<std::string>& blocks) {
    for (const auto& b : blocks)
      if (p.find(b) == std::string::npos) return false;
    return true;
  };
  c.expect(contains_all(prompts[PromptMode::BL1], bl1_blocks) && contains_all(prompts[PromptMode::BL2], bl2_blocks) &&
               contains_all(prompts[PromptMode::Full], full_blocks),
           "a prompt lacks its own blocks");
  c.expect(!contains_all(prompts[PromptMode::BL1], bl2_blocks), "BL1 is not a strict subset of BL2");
  c.expect(!contains_all(prompts[PromptMode::BL2], full_blocks), "BL2 is not a strict subset of FULL");
  fs::remove_all(dir);
  if (c.ok) c.detail = "I = " + join(result.iteration_successes);
  return c;
}

Check coverage_union() {
  Check c;
  oracle::Rng rng(4242);
  auto key = [](int i) { return TargetKey{"p.C.m" + std::to_string(i) + "()", "lib.L.f()"}; };
  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    const int n = static_cast<int>(rng() % 40) + 1;
    MetricsInputs in;
    std::set<TargetKey> tests, scen;
    for (int i = 0; i < n; ++i) {
      in.reachable.insert(key(i));
      if (rng() % 3 == 0) {
        in.test_covered.insert(key(i));
        tests.insert(key(i));
      }
      ScenarioOutcome o;
      o.path.direct_caller = key(i).direct_caller;
      o.path.target = key(i).tpl_method;
      o.path.length = 1;
      o.attempts.resize(1);
      o.status = rng() % 2 ? OutcomeStatus::Reached : OutcomeStatus::Exhausted;
      if (o.status == OutcomeStatus::Reached) scen.insert(key(i));
      if (!tests.contains(key(i))) in.outcomes.push_back(o);
    }
    std::set<TargetKey> expected = tests;
    expected.insert(scen.begin(), scen.end());
    auto r = compute_metrics(in);
    c.expect(r.total_guarantees == static_cast<int>(expected.size()), "union size differs");
    long long num = r.total_guarantees, den = n;
    long long expected_pct = (num * 100) / den + ((num * 100) % den * 2 >= den ? 1 : 0);
    c.expect(format_fraction(num, den) == std::to_string(num) + "/" + std::to_string(den) + " (" +
                                              std::to_string(expected_pct) + "%)",
             "rendering differs for " + std::to_string(num) + "/" + std::to_string(den));
  }
  c.expect(format_fraction(469, 668) == "469/668 (70%)", "469/668 rendered as " + format_fraction(469, 668));
  if (c.ok) c.detail = "200 masks; 469/668 -> 70%";
  return c;
}

Check dedup() {
  Check c;
  auto model = ProjectModel::create(scripted::chain_targets(1, true));
  auto paths = enumerate_paths(model, build_cha(model));
  c.expect(paths.size() == 2, "expected two entry paths");
  if (!c.ok) return c;
  std::map<std::string, int> calls_by_entry;
  scripted::Provider llm([](const std::string&, int) { return scripted::reach_marker(0); });
  // Counts provider calls per path by watching which scenario is live.
  struct CountingProvider : LlmProvider {
    LlmProvider& inner;
    std::map<std::string, int>& by_entry;
    CountingProvider(LlmProvider& i, std::map<std::string, int>& b) : inner(i), by_entry(b) {}
    LlmResponse complete(const LlmRequest& r) override {
      auto entry = r.prompt.substr(r.prompt.find("1. ") + 3);
      ++by_entry[entry.substr(0, entry.find(' '))];
      return inner.complete(r);
    }
  } counting(llm, calls_by_entry);
  scripted::Adapter adapter;
  auto dir = testutil::temp_dir("acc6");
  GenerationSettings settings;
  settings.output_dir = dir.string();
  auto result = run_generation_queue(model, paths, {paths[0].key()}, settings, counting, adapter);
  c.expect(result.outcomes.size() == 2, "expected two outcomes");
  if (!c.ok) return c;
  c.expect(result.outcomes[0].status == OutcomeStatus::Reached, "first path not reached");
  c.expect(result.outcomes[1].status == OutcomeStatus::SkippedDuplicate, "second path not skipped_duplicate");
  c.expect(calls_by_entry[result.outcomes[1].path.entry] == 0, "provider called for the duplicate");
  c.expect(llm.total_calls() == 1, "provider called " + std::to_string(llm.total_calls()) + " times");
  fs::remove_all(dir);
  if (c.ok) c.detail = "1 provider call, duplicate skipped";
  return c;
}

RunConfig poitl_config(const fs::path& out) {
  RunConfig cfg;
  cfg.model_path = testutil::fixture("poitl/model.fix");
  cfg.output_dir = out.string();
  cfg.coverage_paths = {testutil::fixture("poitl/tests.lcov")};
  cfg.llm = "mock:" + testutil::fixture("poitl/responses");
  cfg.rules_path = testutil::fixture("poitl/rules.json");
  return cfg;
}

bool run_pipeline(const RunConfig& cfg) {
  std::ostringstream log;
  for (auto* step : {&cmd_analyze, &cmd_coverage, &cmd_generate, &cmd_triage, &cmd_report})
    if ((*step)(cfg, log) != 0) return false;
  return true;
}

Check triage_shape() {
  Check c;
  auto out = testutil::temp_dir("acc7");
  c.expect(run_pipeline(poitl_config(out)), "pipeline failed");
  if (!c.ok) return c;
  auto results = triage_from_json(nlohmann::json::parse(testutil::read_file(out / "triage.json")));
  std::set<SemgrepClass> classes;
  for (const auto& r : results) classes.insert(r.semgrep_class);
  c.expect(classes.size() == 4, "fixture realizes " + std::to_string(classes.size()) + " classes");
  for (const auto& row : triage_table(results)) {
    c.expect(row.strong_exec <= row.strong_present && row.strong_present <= row.strong, row.module + " strong");
    c.expect(row.loose_exec <= row.loose_present && row.loose_present <= row.loose, row.module + " loose");
    c.expect(row.undetermined_exec <= row.undetermined_present && row.undetermined_present <= row.undetermined,
             row.module + " undetermined");
  }
  bool strong_exec = false;
  for (const auto& r : results)
    if (r.semgrep_class == SemgrepClass::StrongReachable && r.executable && !r.evidence.empty() &&
        r.evidence[0].reference.starts_with("scenarios/"))
      strong_exec = true;
  c.expect(strong_exec, "no strong rule made executable by a scenario");
  fs::remove_all(out);
  if (c.ok) c.detail = "4 classes, monotone counts, strong rule executable";
  return c;
}

Check determinism() {
  Check c;
  auto a = testutil::temp_dir("acc8a");
  auto b = testutil::temp_dir("acc8b");
  for (const auto& dir : {a, b}) {
    auto cfg = poitl_config(dir / "poitl");
    cfg.workers = 3;
    c.expect(run_pipeline(cfg), "poitl pipeline failed");
    RunConfig gh;
    gh.model_path = testutil::fixture("graphhopper/model.fix");
    gh.output_dir = (dir / "graphhopper").string();
    gh.coverage_paths = {testutil::fixture("graphhopper/tests.lcov")};
    gh.llm = "mock:" + testutil::fixture("graphhopper/responses");
    gh.rules_path = testutil::fixture("poitl/rules.json");
    c.expect(run_pipeline(gh), "graphhopper pipeline failed");
  }
  auto snapshot = [](const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = testutil::read_file(e.path());
    return files;
  };
  auto sa = snapshot(a), sb = snapshot(b);
  c.expect(sa.size() == sb.size() && !sa.empty(), "different file sets");
  for (const auto& [name, content] : sa) c.expect(sb.count(name) && sb[name] == content, name + " differs");
  fs::remove_all(a);
  fs::remove_all(b);
  if (c.ok) c.detail = std::to_string(sa.size()) + " files identical";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"CHA oracle equivalence", cha_oracle},
      {"shortest entry path oracle", shortest_path_oracle},
      {"sort example golden fixture", sort_example},
      {"loop bound and ablation counters", loop_bound_and_ablation},
      {"coverage union identity", coverage_union},
      {"dedup guarantee", dedup},
      {"triage shape", triage_shape},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failures += c.ok ? 0 : 1;
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << c.detail << "\n";
  }
  return failures == 0 ? 0 : 1;
}
