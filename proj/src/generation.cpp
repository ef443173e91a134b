#include "tplreach/generation.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

namespace tplreach {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::Reached:
      return "reached";
    case OutcomeStatus::Exhausted:
      return "exhausted";
    case OutcomeStatus::SkippedDuplicate:
      return "skipped_duplicate";
    case OutcomeStatus::Aborted:
      return "aborted";
  }
  return "aborted";
}

std::optional<OutcomeStatus> parse_outcome_status(std::string_view text) {
  for (auto s : {OutcomeStatus::Reached, OutcomeStatus::Exhausted, OutcomeStatus::SkippedDuplicate,
                 OutcomeStatus::Aborted})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

std::string feedback_from_validation(const ValidationResult& result) {
  return "The scenario was rejected before compilation because it alters project behavior.\n" + result.describe();
}

std::string feedback_from_adapter(const AdapterResponse& response, const std::optional<DivergenceReport>& divergence) {
  std::string out;
  switch (response.status) {
    case AdapterStatus::CompileError:
      out = "The scenario does not compile. Errors:\n";
      break;
    case AdapterStatus::RuntimeError:
      out = "The scenario failed while running. Errors:\n";
      break;
    case AdapterStatus::Ok:
      out = "The scenario ran but did not reach the target call site.\n";
      if (divergence) out += divergence->render() + "\n";
      return out;
  }
  for (const auto& d : response.diagnostics)
    if (d.level == DiagnosticLevel::Error) out += d.message + "\n";
  return out;
}

namespace {

std::vector<std::string> path_class_names(const ProjectModel& model, const CallPath& path) {
  std::set<std::string> names;
  for (const auto& hop : path.hops) {
    const auto* cls = model.owner_of(hop);
    if (!cls) continue;
    auto simple = simple_class_name(cls->fq_name);
    names.insert(simple);
    if (auto d = simple.rfind('$'); d != std::string::npos) names.insert(simple.substr(d + 1));
  }
  return {names.begin(), names.end()};
}

void write_file(const fs::path& file, const std::string& text) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw AdapterError("cannot write " + file.string());
  out << text;
}

}  // namespace

ScenarioOutcome generate_for_target(const ProjectModel& model, const ContextBundle& bundle,
                                    const GenerationSettings& settings, LlmProvider& llm,
                                    ExecutionAdapter& adapter) {
  ScenarioOutcome outcome;
  outcome.path = bundle.path;
  const auto rules = settings.rules.empty() ? default_rules(path_class_names(model, bundle.path)) : settings.rules;
  const int budget = settings.prompt.attempt_budget();
  const std::string slug = target_slug(bundle.path.key());
  const fs::path out_dir = settings.output_dir.empty() ? fs::path(".") : fs::path(settings.output_dir);

  std::optional<std::string> feedback;
  for (int k = 1; k <= budget; ++k) {
    AttemptRecord record;
    record.index = k;
    const auto prompt = build_prompt(bundle, settings.prompt, feedback);

    std::string scenario;
    try {
      scenario = llm.complete({slug, prompt, k}).scenario_text;
    } catch (const ProviderError& e) {
      outcome.status = OutcomeStatus::Aborted;
      outcome.error = std::string("provider: ") + e.what();
      return outcome;
    }

    const std::string base = settings.scenario_subdir + "/" + slug + "_attempt" + std::to_string(k);
    record.scenario_path = base + ".scenario";
    std::string next_feedback;
    try {
      write_file(out_dir / record.scenario_path, scenario);
      auto validation = static_validate(scenario, rules);
      record.static_validation = validation.passed;
      for (const auto& v : validation.violations) record.violations.push_back(v.rule);

      if (!validation.passed) {
        next_feedback = feedback_from_validation(validation);
      } else {
        const AdapterRequest compile{AdapterAction::Compile, fs::absolute(out_dir / record.scenario_path).string(),
                                     settings.project_root};
        auto compiled = adapter.execute(compile);
        record.compiled = compiled.status == AdapterStatus::Ok;
        if (!record.compiled) {
          next_feedback = feedback_from_adapter(compiled);
        } else {
          auto run = adapter.execute({AdapterAction::Run, compile.scenario_path, settings.project_root});
          record.executed = run.status == AdapterStatus::Ok;
          if (!record.executed) {
            next_feedback = feedback_from_adapter(run);
          } else {
            CoverageMap coverage(Provenance::ScenarioRun);
            try {
              coverage = parse_lcov(run.lcov.value_or(""), Provenance::ScenarioRun);
            } catch (const FormatError& e) {
              throw AdapterError(std::string("adapter returned malformed lcov: ") + e.what());
            }
            record.target_reached = site_covered(coverage, bundle.path.target_site, model);
            if (record.target_reached) {
              const std::string coverage_path = base + ".lcov";
              write_file(out_dir / coverage_path, to_lcov(coverage));
              outcome.attempts.push_back(std::move(record));
              outcome.status = OutcomeStatus::Reached;
              outcome.final_scenario = FinalScenario{base + ".scenario", coverage_path, k};
              return outcome;
            }
            next_feedback = feedback_from_adapter(run, divergence_report(coverage, bundle.path, model));
          }
        }
      }
    } catch (const AdapterError& e) {
      outcome.attempts.push_back(std::move(record));
      outcome.status = OutcomeStatus::Aborted;
      outcome.error = std::string("adapter: ") + e.what();
      return outcome;
    }

    if (settings.prompt.feedback_enabled() && k < budget) {
      record.feedback = next_feedback;
      feedback = next_feedback;
    }
    outcome.attempts.push_back(std::move(record));
  }
  outcome.status = OutcomeStatus::Exhausted;
  return outcome;
}

std::vector<int> cumulative_successes(const std::vector<ScenarioOutcome>& outcomes, int max_attempts) {
  std::vector<int> counts(static_cast<std::size_t>(std::max(max_attempts, 1)), 0);
  for (const auto& o : outcomes) {
    if (o.status != OutcomeStatus::Reached || o.attempts.empty()) continue;
    for (auto k = o.attempts.size(); k <= counts.size(); ++k) ++counts[k - 1];
  }
  return counts;
}

QueueResult run_generation_queue(const ProjectModel& model, std::vector<CallPath> paths,
                                 const std::set<TargetKey>& uncovered, const GenerationSettings& settings,
                                 LlmProvider& llm, ExecutionAdapter& adapter) {
  sort_generation_queue(paths);
  std::vector<CallPath> queue;
  for (auto& p : paths)
    if (uncovered.contains(p.key())) queue.push_back(std::move(p));

  // Group queue positions by call site, keeping first-appearance order.
  std::vector<std::vector<std::size_t>> groups;
  std::map<TargetKey, std::size_t> group_of;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto [it, fresh] = group_of.try_emplace(queue[i].key(), groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  std::vector<ScenarioOutcome> outcomes(queue.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto g = next.fetch_add(1); g < groups.size(); g = next.fetch_add(1)) {
      bool reached = false;
      for (auto i : groups[g]) {
        if (reached) {
          outcomes[i].path = queue[i];
          outcomes[i].status = OutcomeStatus::SkippedDuplicate;
          continue;
        }
        outcomes[i] = generate_for_target(model, extract_context(model, queue[i]), settings, llm, adapter);
        reached = outcomes[i].status == OutcomeStatus::Reached;
      }
    }
  };

  const auto n = static_cast<std::size_t>(std::max(settings.workers, 1));
  if (n == 1 || groups.size() <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(n, groups.size()); ++t) pool.emplace_back(worker);
  }

  QueueResult result;
  result.iteration_successes = cumulative_successes(outcomes, settings.prompt.max_attempts);
  result.outcomes = std::move(outcomes);
  return result;
}

json path_to_json(const CallPath& path) {
  return {{"entry", path.entry},
          {"hops", path.hops},
          {"direct_caller", path.direct_caller},
          {"target", path.target},
          {"site", {{"caller", path.target_site.caller}, {"index", path.target_site.index}, {"line", path.target_site.line}}},
          {"length", path.length}};
}

CallPath path_from_json(const json& doc) {
  CallPath p;
  p.entry = doc.at("entry").get<std::string>();
  p.hops = doc.at("hops").get<std::vector<std::string>>();
  p.direct_caller = doc.at("direct_caller").get<std::string>();
  p.target = doc.at("target").get<std::string>();
  const auto& site = doc.at("site");
  p.target_site = {site.at("caller").get<std::string>(), site.at("index").get<std::size_t>(),
                   site.at("line").get<int>()};
  p.length = doc.at("length").get<std::size_t>();
  return p;
}

json outcome_to_json(const ScenarioOutcome& o) {
  json attempts = json::array();
  for (const auto& a : o.attempts) {
    attempts.push_back({{"index", a.index},
                        {"static_validation", a.static_validation},
                        {"compiled", a.compiled},
                        {"executed", a.executed},
                        {"target_reached", a.target_reached},
                        {"scenario", a.scenario_path},
                        {"violations", a.violations},
                        {"feedback", a.feedback ? json(*a.feedback) : json(nullptr)}});
  }
  json final_scenario = nullptr;
  if (o.final_scenario)
    final_scenario = {{"path", o.final_scenario->path},
                      {"coverage", o.final_scenario->coverage_path},
                      {"attempt", o.final_scenario->attempt}};
  return {{"target", {{"direct_caller", o.path.direct_caller}, {"tpl_method", o.path.target}}},
          {"slug", target_slug(o.path.key())},
          {"path", path_to_json(o.path)},
          {"status", std::string(to_string(o.status))},
          {"attempts", attempts},
          {"final_scenario", final_scenario},
          {"error", o.error.empty() ? json(nullptr) : json(o.error)}};
}

ScenarioOutcome outcome_from_json(const json& doc) {
  ScenarioOutcome o;
  o.path = path_from_json(doc.at("path"));
  auto status = parse_outcome_status(doc.at("status").get<std::string>());
  if (!status) throw std::invalid_argument("unknown outcome status " + doc.at("status").dump());
  o.status = *status;
  for (const auto& a : doc.at("attempts")) {
    AttemptRecord r;
    r.index = a.at("index").get<int>();
    r.static_validation = a.at("static_validation").get<bool>();
    r.compiled = a.at("compiled").get<bool>();
    r.executed = a.at("executed").get<bool>();
    r.target_reached = a.at("target_reached").get<bool>();
    r.scenario_path = a.at("scenario").get<std::string>();
    r.violations = a.at("violations").get<std::vector<std::string>>();
    if (!a.at("feedback").is_null()) r.feedback = a.at("feedback").get<std::string>();
    o.attempts.push_back(std::move(r));
  }
  if (const auto& f = doc.at("final_scenario"); !f.is_null())
    o.final_scenario = FinalScenario{f.at("path").get<std::string>(), f.at("coverage").get<std::string>(),
                                     f.at("attempt").get<int>()};
  if (const auto& e = doc.at("error"); !e.is_null()) o.error = e.get<std::string>();
  return o;
}

}  // namespace tplreach
