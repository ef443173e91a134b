#include "tplreach/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace tplreach {

ClassHierarchy::ClassHierarchy(const ProjectModel& model) : model_(model) {
  std::map<std::string, std::vector<std::string>> direct_subs;
  for (const auto& c : model.classes()) {
    direct_subs[c.fq_name];
    for (const auto& s : c.supertypes) direct_subs[s].push_back(c.fq_name);
  }
  // The hierarchy is acyclic (checked at model creation), so a plain
  // worklist closure terminates.
  for (const auto& c : model.classes()) {
    auto& closure = subtypes_[c.fq_name];
    std::deque<std::string> work{c.fq_name};
    while (!work.empty()) {
      auto cur = std::move(work.front());
      work.pop_front();
      if (!closure.insert(cur).second) continue;
      for (const auto& sub : direct_subs[cur]) work.push_back(sub);
    }
  }
}

bool ClassHierarchy::contains(std::string_view fq_name) const { return subtypes_.find(fq_name) != subtypes_.end(); }

const std::set<std::string>& ClassHierarchy::subtypes_inclusive(std::string_view fq_name) const {
  static const std::set<std::string> empty;
  auto it = subtypes_.find(fq_name);
  return it == subtypes_.end() ? empty : it->second;
}

std::optional<std::string> ClassHierarchy::resolve(std::string_view fq_name,
                                                   std::string_view signature) const {
  // Depth-first in declaration order: the first supertype plays the
  // superclass, so its whole chain is searched before later supertypes.
  std::vector<std::string> work{std::string(fq_name)};
  std::set<std::string> seen;
  while (!work.empty()) {
    auto cur = std::move(work.back());
    work.pop_back();
    if (!seen.insert(cur).second) continue;
    const auto* cls = model_.find_class(cur);
    if (!cls) continue;
    std::string id = cur + "." + std::string(signature);
    if (model_.find_method(id)) return id;
    for (auto it = cls->supertypes.rbegin(); it != cls->supertypes.rend(); ++it) work.push_back(*it);
  }
  return std::nullopt;
}

ClassHierarchy::Resolution ClassHierarchy::dispatch_targets(const CallSite& site) const {
  Resolution res;
  if (!site.receiver_type) {
    // Owner-less static call: the target is already a full method id.
    if (model_.find_method(site.target))
      res.targets.push_back(site.target);
    else
      res.receiver_known = false;
    return res;
  }
  if (!contains(*site.receiver_type)) {
    res.receiver_known = false;
    return res;
  }
  if (site.dispatch != Dispatch::Virtual) {
    if (auto id = resolve(*site.receiver_type, site.target)) res.targets.push_back(*id);
    return res;
  }
  std::set<std::string> targets;
  for (const auto& sub : subtypes_inclusive(*site.receiver_type)) {
    if (auto id = resolve(sub, site.target)) targets.insert(*id);
  }
  res.targets.assign(targets.begin(), targets.end());
  return res;
}

std::vector<TplCallSite> tpl_call_sites(const ProjectModel& model) {
  ClassHierarchy hierarchy(model);
  return tpl_call_sites(model, hierarchy);
}

std::vector<TplCallSite> tpl_call_sites(const ProjectModel& model, const ClassHierarchy& hierarchy) {
  std::vector<TplCallSite> out;
  for (const auto& cls : model.classes()) {
    if (!cls.is_project_class) continue;
    for (const auto& method : cls.methods) {
      for (std::size_t i = 0; i < method.calls.size(); ++i) {
        auto res = hierarchy.dispatch_targets(method.calls[i]);
        TplCallSite site{method.calls[i], i, res.targets, {}};
        for (const auto& t : res.targets)
          if (model.is_dependency_method(t)) site.tpl_targets.push_back(t);
        if (!site.tpl_targets.empty()) out.push_back(std::move(site));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const TplCallSite& a, const TplCallSite& b) {
    return std::tie(a.site.caller, a.site.line, a.index) < std::tie(b.site.caller, b.site.line, b.index);
  });
  return out;
}

}  // namespace tplreach
