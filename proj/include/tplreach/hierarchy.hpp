#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tplreach/model.hpp"

namespace tplreach {

/// Type hierarchy view over a ProjectModel: subtype closure and
/// method lookup through inherited definitions.
class ClassHierarchy {
 public:
  explicit ClassHierarchy(const ProjectModel& model);

  bool contains(std::string_view fq_name) const;

  /// The class itself plus every transitive subtype, sorted.
  const std::set<std::string>& subtypes_inclusive(std::string_view fq_name) const;

  /// Method id that a receiver of exactly `fq_name` runs for `signature`: the
  /// class's own declaration, else the first definition found walking the
  /// supertypes depth-first in declaration order (the first supertype acts as
  /// the superclass).
  std::optional<std::string> resolve(std::string_view fq_name, std::string_view signature) const;

  struct Resolution {
    bool receiver_known = true;
    std::vector<std::string> targets;  // sorted, unique
  };

  /// CHA dispatch: virtual sites fan out over every subtype of the declared
  /// receiver; static and constructor sites resolve to one method.
  Resolution dispatch_targets(const CallSite& site) const;

 private:
  const ProjectModel& model_;
  std::map<std::string, std::set<std::string>, std::less<>> subtypes_;
};

/// A project call site whose CHA targets include at least one dependency
/// method.
struct TplCallSite {
  CallSite site;
  std::size_t index = 0;                 // position in the caller's call list
  std::vector<std::string> targets;      // every resolved target
  std::vector<std::string> tpl_targets;  // the dependency subset

  bool operator==(const TplCallSite&) const = default;
};

/// Every tpl call site of the model, ordered by (caller id, line, index).
std::vector<TplCallSite> tpl_call_sites(const ProjectModel& model);
std::vector<TplCallSite> tpl_call_sites(const ProjectModel& model, const ClassHierarchy& hierarchy);

}  // namespace tplreach
