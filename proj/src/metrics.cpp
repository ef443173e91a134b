#include "tplreach/metrics.hpp"

namespace tplreach {

using nlohmann::json;

int percent_half_up(long long n, long long d) {
  if (d <= 0) return 0;
  return static_cast<int>((200 * n + d) / (2 * d));
}

std::string format_fraction(long long n, long long d) {
  return std::to_string(n) + "/" + std::to_string(d) + " (" + std::to_string(percent_half_up(n, d)) + "%)";
}

std::set<TargetKey> reached_targets(const std::vector<ScenarioOutcome>& outcomes) {
  std::set<TargetKey> out;
  for (const auto& o : outcomes)
    if (o.status == OutcomeStatus::Reached) out.insert(o.target());
  return out;
}

MetricsReport compute_metrics(const MetricsInputs& in) {
  MetricsReport r;
  r.project_id = in.project_id;
  std::set<std::string> methods;
  for (const auto& k : in.reachable) methods.insert(k.tpl_method);
  r.unique_tpl_methods = static_cast<int>(methods.size());
  r.tpl_call_sites = static_cast<int>(in.reachable.size());

  std::set<TargetKey> tests;
  for (const auto& k : in.test_covered)
    if (in.reachable.contains(k)) tests.insert(k);
  r.covered_by_tests = static_cast<int>(tests.size());
  r.attempted = r.tpl_call_sites - r.covered_by_tests;

  std::set<TargetKey> scenarios;
  for (const auto& k : reached_targets(in.outcomes))
    if (in.reachable.contains(k) && !tests.contains(k)) scenarios.insert(k);
  r.covered_by_scenarios = static_cast<int>(scenarios.size());

  std::set<TargetKey> total = tests;
  total.insert(scenarios.begin(), scenarios.end());
  r.total_guarantees = static_cast<int>(total.size());
  r.additional_percent =
      percent_half_up(r.total_guarantees, r.tpl_call_sites) - percent_half_up(r.covered_by_tests, r.tpl_call_sites);

  r.iterations = cumulative_successes(in.outcomes, in.max_attempts);
  for (const auto& o : in.outcomes) {
    if (o.status != OutcomeStatus::Reached) continue;
    auto bucket = std::min<std::size_t>(std::max<std::size_t>(o.path.length, 1), 4) - 1;
    ++r.path_histogram[bucket];
  }
  if (in.bl1_outcomes) r.bl1 = static_cast<int>(reached_targets(*in.bl1_outcomes).size());
  if (in.bl2_outcomes) r.bl2 = static_cast<int>(reached_targets(*in.bl2_outcomes).size());
  return r;
}

json metrics_to_json(const MetricsReport& r) {
  json iterations = json::object();
  for (std::size_t k = 0; k < r.iterations.size(); ++k) iterations["I" + std::to_string(k + 1)] = r.iterations[k];
  return {{"project_id", r.project_id},
          {"unique_tpl_methods", r.unique_tpl_methods},
          {"tpl_call_sites", r.tpl_call_sites},
          {"covered_by_tests", {{"count", r.covered_by_tests}, {"text", format_fraction(r.covered_by_tests, r.tpl_call_sites)}}},
          {"attempted", r.attempted},
          {"covered_by_scenarios",
           {{"count", r.covered_by_scenarios}, {"text", format_fraction(r.covered_by_scenarios, r.attempted)}}},
          {"total_guarantees",
           {{"count", r.total_guarantees}, {"text", format_fraction(r.total_guarantees, r.tpl_call_sites)}}},
          {"additional_by_tool", std::to_string(r.additional_percent) + "%"},
          {"iterations", iterations},
          {"path_histogram",
           {{"1", r.path_histogram[0]}, {"2", r.path_histogram[1]}, {"3", r.path_histogram[2]}, {"4+", r.path_histogram[3]}}},
          {"BL1", r.bl1 ? json(*r.bl1) : json()},
          {"BL2", r.bl2 ? json(*r.bl2) : json()}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string rq123_csv(const MetricsReport& r) {
  std::string header = "Project,m_tpl,TPL call sites,Dynamic guarantees (tests),Dynamic guarantees (scenarios),"
                       "Total guarantees,Additional guarantees,BL1,BL2";
  for (std::size_t k = 0; k < r.iterations.size(); ++k) header += ",I" + std::to_string(k + 1);
  std::string row = csv_field(r.project_id) + "," + std::to_string(r.unique_tpl_methods) + "," +
                    std::to_string(r.tpl_call_sites) + "," +
                    csv_field(format_fraction(r.covered_by_tests, r.tpl_call_sites)) + "," +
                    csv_field(format_fraction(r.covered_by_scenarios, r.attempted)) + "," +
                    csv_field(format_fraction(r.total_guarantees, r.tpl_call_sites)) + "," +
                    std::to_string(r.additional_percent) + "%," + (r.bl1 ? std::to_string(*r.bl1) : "-") + "," +
                    (r.bl2 ? std::to_string(*r.bl2) : "-");
  for (int v : r.iterations) row += "," + std::to_string(v);
  return header + "\n" + row + "\n";
}

std::string rq3paths_csv(const MetricsReport& r) {
  int total = 0;
  for (int v : r.path_histogram) total += v;
  return "Project,1,2,3,4+,Total\n" + csv_field(r.project_id) + "," + std::to_string(r.path_histogram[0]) + "," +
         std::to_string(r.path_histogram[1]) + "," + std::to_string(r.path_histogram[2]) + "," +
         std::to_string(r.path_histogram[3]) + "," + std::to_string(total) + "\n";
}

}  // namespace tplreach
