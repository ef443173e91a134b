#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tplreach/coverage.hpp"
#include "tplreach/hierarchy.hpp"
#include "tplreach/model.hpp"

namespace tplreach {

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VulnPattern {
  std::string method_glob;  // matched against resolved tpl method ids
  std::optional<std::string> required_import;

  bool operator==(const VulnPattern&) const = default;
};

struct VulnRule {
  std::string rule_id;
  std::string cve_id;
  std::string coordinate;
  std::optional<std::string> module;  // defaults to the model's project id
  std::optional<VulnPattern> pattern;  // absent: presence-based rule
  std::vector<std::string> vulnerable_versions;
  bool presence_positive = false;

  bool operator==(const VulnRule&) const = default;
};

enum class SemgrepClass { StrongReachable, LooseReachable, Undetermined, Unreachable };
std::string_view to_string(SemgrepClass c);
std::optional<SemgrepClass> parse_semgrep_class(std::string_view text);

/// JSON array of rules. Throws RuleError on structural problems and BadGlob
/// on a malformed method glob.
std::vector<VulnRule> parse_rules_json(std::string_view text);
nlohmann::json rule_to_json(const VulnRule& rule);

/// Coordinate shipping a dependency class: its declared `dependency`, else
/// the declared coordinate whose group id is the longest package prefix.
std::optional<std::string> coordinate_of_class(const ProjectModel& model, const ClassDecl& cls);

struct MatchedSite {
  CallSiteRef site;
  std::string tpl_method;

  auto operator<=>(const MatchedSite&) const = default;
};

/// Pattern rules: sites with a target matching the glob whose calling class
/// imports `required_import`. Presence rules: sites with a target shipped by
/// the rule's coordinate.
std::vector<MatchedSite> matching_sites(const VulnRule& rule, const ProjectModel& model,
                                        const std::vector<TplCallSite>& sites);

SemgrepClass classify_rule(const VulnRule& rule, const ProjectModel& model);
SemgrepClass classify_rule(const VulnRule& rule, const ProjectModel& model, const std::vector<TplCallSite>& sites);

/// A coverage map plus the artifact it came from ("developer tests" or a
/// scenario file).
struct EvidenceSource {
  std::string reference;
  CoverageMap coverage;
};

struct TriageEvidence {
  MatchedSite site;
  std::string reference;

  bool operator==(const TriageEvidence&) const = default;
};

struct TriageResult {
  std::string rule_id;
  std::string cve_id;
  std::string module;
  std::string coordinate;
  SemgrepClass semgrep_class = SemgrepClass::Undetermined;
  bool call_site_present = false;
  bool executable = false;
  std::vector<TriageEvidence> evidence;  // one entry per covered site

  bool operator==(const TriageResult&) const = default;
};

/// Evidence lists each matched site covered by some source, citing the first
/// source (in the given order) that covers it.
TriageResult augment(const VulnRule& rule, SemgrepClass classification, const ProjectModel& model,
                     const std::vector<TplCallSite>& sites, const std::vector<EvidenceSource>& evidence);

nlohmann::json triage_to_json(const std::vector<TriageResult>& results);
std::vector<TriageResult> triage_from_json(const nlohmann::json& doc);

struct TriageTableRow {
  std::string module;
  int strong = 0, strong_present = 0, strong_exec = 0;
  int loose = 0, loose_present = 0, loose_exec = 0;
  int undetermined = 0, undetermined_present = 0, undetermined_exec = 0;

  bool operator==(const TriageTableRow&) const = default;
};

/// Per-module counts (sorted by module) followed by a "Total" row.
/// Unreachable rules are not counted.
std::vector<TriageTableRow> triage_table(const std::vector<TriageResult>& results);
std::string triage_table_csv(const std::vector<TriageTableRow>& rows);

}  // namespace tplreach
