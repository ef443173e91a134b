#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tplreach/callgraph.hpp"
#include "tplreach/generation.hpp"

namespace tplreach {

/// Integer percentage rounded half up; 0 when `d` is 0.
int percent_half_up(long long n, long long d);
/// "n/d (p%)".
std::string format_fraction(long long n, long long d);

struct MetricsReport {
  std::string project_id;
  int unique_tpl_methods = 0;
  int tpl_call_sites = 0;
  int covered_by_tests = 0;
  int attempted = 0;
  int covered_by_scenarios = 0;
  int total_guarantees = 0;
  int additional_percent = 0;  // total% - tests%, both rounded
  std::vector<int> iterations;  // I1..Imax, cumulative
  std::array<int, 4> path_histogram{};  // reached scenarios by path length 1, 2, 3, 4+
  std::optional<int> bl1;
  std::optional<int> bl2;

  bool operator==(const MetricsReport&) const = default;
};

struct MetricsInputs {
  std::string project_id;
  std::set<TargetKey> reachable;       // call sites with at least one entry path
  std::set<TargetKey> test_covered;    // covered by developer tests
  std::vector<ScenarioOutcome> outcomes;
  int max_attempts = 5;
  std::optional<std::vector<ScenarioOutcome>> bl1_outcomes;
  std::optional<std::vector<ScenarioOutcome>> bl2_outcomes;
};

std::set<TargetKey> reached_targets(const std::vector<ScenarioOutcome>& outcomes);

MetricsReport compute_metrics(const MetricsInputs& inputs);

nlohmann::json metrics_to_json(const MetricsReport& report);

/// Project, m_tpl, call sites, tests, scenarios, total, additional, BL1, BL2, I1..
std::string rq123_csv(const MetricsReport& report);
/// Project, 1, 2, 3, 4+, total.
std::string rq3paths_csv(const MetricsReport& report);

}  // namespace tplreach
