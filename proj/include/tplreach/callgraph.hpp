#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tplreach/hierarchy.hpp"
#include "tplreach/model.hpp"

namespace tplreach {

/// Identifies one call record: the `index`-th call of `caller`.
struct CallSiteRef {
  std::string caller;
  std::size_t index = 0;
  int line = 0;

  auto operator<=>(const CallSiteRef&) const = default;
};

struct CallEdge {
  std::string from;
  std::string to;
  int line = 0;
  CallSiteRef site;

  auto operator<=>(const CallEdge&) const = default;
};

struct CallGraph {
  std::set<std::string> nodes;
  std::vector<CallEdge> edges;  // sorted
  std::set<std::string> entry_points;
  std::vector<std::string> warnings;

  bool operator==(const CallGraph&) const = default;
};

/// A tpl call site as a pathfinding target: the (m_dp, m_tpl) pair plus the
/// concrete call record.
struct TargetKey {
  std::string direct_caller;
  std::string tpl_method;

  auto operator<=>(const TargetKey&) const = default;
};

struct TplTarget {
  TargetKey key;
  CallSiteRef site;

  auto operator<=>(const TplTarget&) const = default;
};

/// entry -> ... -> direct caller, then the tpl edge to `target`.
/// `length` counts the methods in `hops`, so a public direct caller yields 1.
struct CallPath {
  std::string entry;
  std::vector<std::string> hops;
  std::string direct_caller;
  std::string target;
  CallSiteRef target_site;
  std::size_t length = 0;

  TargetKey key() const { return {direct_caller, target}; }
  bool operator==(const CallPath&) const = default;
};

CallGraph build_cha(const ProjectModel& model);
CallGraph reverse(const CallGraph& graph);

/// Distinct tpl targets of the model; for an (m_dp, m_tpl) pair invoked from
/// several records the earliest record represents it.
std::vector<TplTarget> tpl_targets(const ProjectModel& model);

/// Shortest route from a public method to the target's direct caller. BFS
/// walks callers level by level in lexicographic order and stops at the first
/// level holding an entry point, picking its smallest id.
std::optional<CallPath> find_entry_path(const CallGraph& graph, const TplTarget& target);

/// One path per (m_e, m_dp, m_tpl), sorted by length then (m_dp, m_tpl, m_e).
/// Entry points end a BFS branch, so a public direct caller only yields its
/// length-1 path.
std::vector<CallPath> enumerate_paths(const ProjectModel& model, const CallGraph& graph);

void sort_generation_queue(std::vector<CallPath>& paths);

/// `caller -> callee @line`, one edge per line, sorted.
std::string dump_edges(const CallGraph& graph);

}  // namespace tplreach
