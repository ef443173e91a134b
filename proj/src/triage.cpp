#include "tplreach/triage.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tplreach/glob.hpp"

namespace tplreach {

using nlohmann::json;

std::string_view to_string(SemgrepClass c) {
  switch (c) {
    case SemgrepClass::StrongReachable:
      return "strong_reachable";
    case SemgrepClass::LooseReachable:
      return "loose_reachable";
    case SemgrepClass::Undetermined:
      return "undetermined";
    case SemgrepClass::Unreachable:
      return "unreachable";
  }
  return "undetermined";
}

std::optional<SemgrepClass> parse_semgrep_class(std::string_view text) {
  for (auto c : {SemgrepClass::StrongReachable, SemgrepClass::LooseReachable, SemgrepClass::Undetermined,
                 SemgrepClass::Unreachable})
    if (to_string(c) == text) return c;
  return std::nullopt;
}

namespace {

const json& require(const json& obj, const char* key, json::value_t kind, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw RuleError(where + ": missing '" + key + "'");
  if (it->type() != kind) throw RuleError(where + "/" + key + ": wrong kind");
  return *it;
}

}  // namespace

std::vector<VulnRule> parse_rules_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw RuleError(std::string("rules file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw RuleError("rules file must hold a JSON array");
  static const std::set<std::string> known = {"rule_id", "cve_id", "coordinate", "module", "pattern",
                                              "vulnerable_versions", "presence_positive"};
  std::vector<VulnRule> rules;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& r = doc[i];
    const std::string where = "/" + std::to_string(i);
    if (!r.is_object()) throw RuleError(where + ": rule must be an object");
    for (const auto& [key, _] : r.items())
      if (!known.contains(key)) throw RuleError(where + ": unknown field '" + key + "'");
    VulnRule rule;
    rule.rule_id = require(r, "rule_id", json::value_t::string, where).get<std::string>();
    rule.cve_id = require(r, "cve_id", json::value_t::string, where).get<std::string>();
    rule.coordinate = require(r, "coordinate", json::value_t::string, where).get<std::string>();
    if (rule.rule_id.empty()) throw RuleError(where + "/rule_id: must be non-empty");
    if (!ids.insert(rule.rule_id).second) throw RuleError(where + ": duplicate rule id '" + rule.rule_id + "'");
    if (auto m = r.find("module"); m != r.end() && !m->is_null()) {
      if (!m->is_string()) throw RuleError(where + "/module: wrong kind");
      rule.module = m->get<std::string>();
    }
    if (auto p = r.find("pattern"); p != r.end() && !p->is_null()) {
      if (!p->is_object()) throw RuleError(where + "/pattern: wrong kind");
      VulnPattern pattern;
      pattern.method_glob = require(*p, "method_glob", json::value_t::string, where + "/pattern").get<std::string>();
      Glob check(pattern.method_glob);  // BadGlob surfaces here
      if (auto imp = p->find("required_import"); imp != p->end() && !imp->is_null()) {
        if (!imp->is_string()) throw RuleError(where + "/pattern/required_import: wrong kind");
        pattern.required_import = imp->get<std::string>();
      }
      rule.pattern = std::move(pattern);
    }
    if (auto v = r.find("vulnerable_versions"); v != r.end()) {
      if (!v->is_array()) throw RuleError(where + "/vulnerable_versions: wrong kind");
      for (const auto& e : *v) {
        if (!e.is_string()) throw RuleError(where + "/vulnerable_versions: entries must be strings");
        rule.vulnerable_versions.push_back(e.get<std::string>());
      }
    }
    if (auto pp = r.find("presence_positive"); pp != r.end()) {
      if (!pp->is_boolean()) throw RuleError(where + "/presence_positive: wrong kind");
      rule.presence_positive = pp->get<bool>();
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

json rule_to_json(const VulnRule& rule) {
  json pattern = nullptr;
  if (rule.pattern)
    pattern = {{"method_glob", rule.pattern->method_glob},
               {"required_import", rule.pattern->required_import ? json(*rule.pattern->required_import) : json()}};
  return {{"rule_id", rule.rule_id},
          {"cve_id", rule.cve_id},
          {"coordinate", rule.coordinate},
          {"module", rule.module ? json(*rule.module) : json()},
          {"pattern", pattern},
          {"vulnerable_versions", rule.vulnerable_versions},
          {"presence_positive", rule.presence_positive}};
}

std::optional<std::string> coordinate_of_class(const ProjectModel& model, const ClassDecl& cls) {
  if (cls.is_project_class) return std::nullopt;
  if (cls.dependency) return cls.dependency;
  std::optional<std::string> best;
  std::size_t best_len = 0;
  bool ambiguous = false;
  for (const auto& dep : model.dependencies()) {
    const auto group = dep.coordinate.substr(0, dep.coordinate.find(':'));
    if (group.empty() || !cls.fq_name.starts_with(group + ".")) continue;
    if (group.size() > best_len) {
      best = dep.coordinate;
      best_len = group.size();
      ambiguous = false;
    } else if (group.size() == best_len) {
      ambiguous = true;
    }
  }
  return ambiguous ? std::nullopt : best;
}

std::vector<MatchedSite> matching_sites(const VulnRule& rule, const ProjectModel& model,
                                        const std::vector<TplCallSite>& sites) {
  std::optional<Glob> glob;
  if (rule.pattern) glob.emplace(rule.pattern->method_glob);
  std::set<MatchedSite> out;
  for (const auto& s : sites) {
    if (rule.pattern && rule.pattern->required_import) {
      const auto* caller_class = model.owner_of(s.site.caller);
      const auto& wanted = *rule.pattern->required_import;
      bool imported = caller_class && std::any_of(caller_class->imports.begin(), caller_class->imports.end(),
                                                  [&](const std::string& i) {
                                                    return i == wanted ||
                                                           (i.ends_with(".*") &&
                                                            wanted.starts_with(i.substr(0, i.size() - 1)) &&
                                                            wanted.find('.', i.size() - 1) == std::string::npos);
                                                  });
      if (!imported) continue;
    }
    for (const auto& target : s.tpl_targets) {
      bool hit = false;
      if (glob) {
        hit = glob->matches(target);
      } else if (const auto* owner = model.owner_of(target)) {
        hit = coordinate_of_class(model, *owner) == rule.coordinate;
      }
      if (hit) out.insert({{s.site.caller, s.index, s.site.line}, target});
    }
  }
  return {out.begin(), out.end()};
}

SemgrepClass classify_rule(const VulnRule& rule, const ProjectModel& model) {
  return classify_rule(rule, model, tpl_call_sites(model));
}

SemgrepClass classify_rule(const VulnRule& rule, const ProjectModel& model, const std::vector<TplCallSite>& sites) {
  if (rule.pattern)
    return matching_sites(rule, model, sites).empty() ? SemgrepClass::Unreachable : SemgrepClass::StrongReachable;
  bool vulnerable_present = false;
  for (const auto& dep : model.dependencies()) {
    if (dep.coordinate != rule.coordinate) continue;
    vulnerable_present = rule.vulnerable_versions.empty() ||
                         std::find(rule.vulnerable_versions.begin(), rule.vulnerable_versions.end(), dep.version) !=
                             rule.vulnerable_versions.end();
  }
  return vulnerable_present && rule.presence_positive ? SemgrepClass::LooseReachable : SemgrepClass::Undetermined;
}

TriageResult augment(const VulnRule& rule, SemgrepClass classification, const ProjectModel& model,
                     const std::vector<TplCallSite>& sites, const std::vector<EvidenceSource>& evidence) {
  TriageResult r;
  r.rule_id = rule.rule_id;
  r.cve_id = rule.cve_id;
  r.module = rule.module.value_or(model.project_id());
  r.coordinate = rule.coordinate;
  r.semgrep_class = classification;
  const auto matched = matching_sites(rule, model, sites);
  r.call_site_present = !matched.empty();
  for (const auto& m : matched) {
    for (const auto& source : evidence) {
      if (site_covered(source.coverage, m.site, model)) {
        r.evidence.push_back({m, source.reference});
        break;
      }
    }
  }
  r.executable = !r.evidence.empty();
  return r;
}

json triage_to_json(const std::vector<TriageResult>& results) {
  json rows = json::array();
  for (const auto& r : results) {
    json evidence = json::array();
    for (const auto& e : r.evidence)
      evidence.push_back({{"caller", e.site.site.caller},
                          {"index", e.site.site.index},
                          {"line", e.site.site.line},
                          {"tpl_method", e.site.tpl_method},
                          {"reference", e.reference}});
    rows.push_back({{"rule_id", r.rule_id},
                    {"cve_id", r.cve_id},
                    {"module", r.module},
                    {"coordinate", r.coordinate},
                    {"semgrep_class", std::string(to_string(r.semgrep_class))},
                    {"call_site_present", r.call_site_present},
                    {"executable", r.executable},
                    {"evidence", evidence}});
  }
  return rows;
}

std::vector<TriageResult> triage_from_json(const json& doc) {
  std::vector<TriageResult> out;
  for (const auto& row : doc) {
    TriageResult r;
    r.rule_id = row.at("rule_id").get<std::string>();
    r.cve_id = row.at("cve_id").get<std::string>();
    r.module = row.at("module").get<std::string>();
    r.coordinate = row.at("coordinate").get<std::string>();
    auto cls = parse_semgrep_class(row.at("semgrep_class").get<std::string>());
    if (!cls) throw RuleError("unknown semgrep class " + row.at("semgrep_class").dump());
    r.semgrep_class = *cls;
    r.call_site_present = row.at("call_site_present").get<bool>();
    r.executable = row.at("executable").get<bool>();
    for (const auto& e : row.at("evidence"))
      r.evidence.push_back({{{e.at("caller").get<std::string>(), e.at("index").get<std::size_t>(),
                              e.at("line").get<int>()},
                             e.at("tpl_method").get<std::string>()},
                            e.at("reference").get<std::string>()});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TriageTableRow> triage_table(const std::vector<TriageResult>& results) {
  std::map<std::string, TriageTableRow> by_module;
  TriageTableRow total{"Total"};
  for (const auto& r : results) {
    if (r.semgrep_class == SemgrepClass::Unreachable) continue;
    auto& row = by_module[r.module];
    row.module = r.module;
    for (auto* t : {&row, &total}) {
      auto bump = [&](int& rules, int& present, int& exec) {
        rules += 1;
        present += r.call_site_present ? 1 : 0;
        exec += r.executable ? 1 : 0;
      };
      if (r.semgrep_class == SemgrepClass::StrongReachable)
        bump(t->strong, t->strong_present, t->strong_exec);
      else if (r.semgrep_class == SemgrepClass::LooseReachable)
        bump(t->loose, t->loose_present, t->loose_exec);
      else
        bump(t->undetermined, t->undetermined_present, t->undetermined_exec);
    }
  }
  std::vector<TriageTableRow> rows;
  for (auto& [_, row] : by_module) rows.push_back(row);
  rows.push_back(total);
  return rows;
}

std::string triage_table_csv(const std::vector<TriageTableRow>& rows) {
  std::string out =
      "Module,Strong reach.,Call site present,Executable,Loose reach.,Call site present,Executable,"
      "Undet.,Call site present,Executable\n";
  for (const auto& r : rows) {
    out += r.module;
    for (int v : {r.strong, r.strong_present, r.strong_exec, r.loose, r.loose_present, r.loose_exec, r.undetermined,
                  r.undetermined_present, r.undetermined_exec})
      out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

}  // namespace tplreach
