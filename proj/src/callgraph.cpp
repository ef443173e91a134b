#include "tplreach/callgraph.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace tplreach {

namespace {

using CallerIndex = std::map<std::string, std::set<std::string>>;

CallerIndex index_callers(const CallGraph& graph) {
  CallerIndex index;
  for (const auto& e : graph.edges) index[e.to].insert(e.from);
  return index;
}

// Level-synchronous BFS from `start` over caller edges. Entry points are
// recorded and not expanded further. Returns entry -> route (entry first).
std::vector<std::vector<std::string>> entry_routes(const CallerIndex& callers,
                                                   const std::set<std::string>& entries,
                                                   const std::string& start, bool first_level_only) {
  if (entries.contains(start)) return {{start}};

  std::map<std::string, std::string> parent;
  std::set<std::string> visited{start};
  std::vector<std::string> frontier{start};
  std::vector<std::string> found;
  while (!frontier.empty()) {
    std::vector<std::string> next;
    std::vector<std::string> level_found;
    for (const auto& node : frontier) {
      auto it = callers.find(node);
      if (it == callers.end()) continue;
      for (const auto& caller : it->second) {
        if (!visited.insert(caller).second) continue;
        parent[caller] = node;
        if (entries.contains(caller))
          level_found.push_back(caller);
        else
          next.push_back(caller);
      }
    }
    std::sort(level_found.begin(), level_found.end());
    found.insert(found.end(), level_found.begin(), level_found.end());
    if (first_level_only && !found.empty()) {
      found.resize(1);
      break;
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }

  std::vector<std::vector<std::string>> routes;
  for (const auto& entry : found) {
    std::vector<std::string> route{entry};
    for (auto cur = entry; cur != start;) {
      cur = parent.at(cur);
      route.push_back(cur);
    }
    routes.push_back(std::move(route));
  }
  return routes;
}

CallPath make_path(std::vector<std::string> route, const TplTarget& target) {
  CallPath path;
  path.entry = route.front();
  path.direct_caller = target.key.direct_caller;
  path.target = target.key.tpl_method;
  path.target_site = target.site;
  path.length = route.size();
  path.hops = std::move(route);
  return path;
}

}  // namespace

CallGraph build_cha(const ProjectModel& model) {
  ClassHierarchy hierarchy(model);
  CallGraph graph;
  for (const auto& cls : model.classes()) {
    for (const auto& method : cls.methods) {
      graph.nodes.insert(method.id);
      if (cls.is_project_class && method.visibility == Visibility::Public)
        graph.entry_points.insert(method.id);
    }
  }
  for (const auto& cls : model.classes()) {
    if (!cls.is_project_class) continue;
    for (const auto& method : cls.methods) {
      for (std::size_t i = 0; i < method.calls.size(); ++i) {
        const auto& call = method.calls[i];
        auto res = hierarchy.dispatch_targets(call);
        const std::string where = method.id + " @" + std::to_string(call.line);
        if (!res.receiver_known) {
          graph.warnings.push_back("unresolved receiver '" +
                                   call.receiver_type.value_or(call.target) + "' at " + where);
          continue;
        }
        if (res.targets.empty()) {
          graph.warnings.push_back("no definition of '" + call.target + "' for receiver '" +
                                   *call.receiver_type + "' at " + where);
          continue;
        }
        for (const auto& t : res.targets)
          graph.edges.push_back({method.id, t, call.line, {method.id, i, call.line}});
      }
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  return graph;
}

CallGraph reverse(const CallGraph& graph) {
  CallGraph out;
  out.nodes = graph.nodes;
  out.entry_points = graph.entry_points;
  out.warnings = graph.warnings;
  out.edges.reserve(graph.edges.size());
  for (const auto& e : graph.edges) out.edges.push_back({e.to, e.from, e.line, e.site});
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<TplTarget> tpl_targets(const ProjectModel& model) {
  std::map<TargetKey, CallSiteRef> first;
  for (const auto& site : tpl_call_sites(model)) {
    for (const auto& t : site.tpl_targets)
      first.try_emplace(TargetKey{site.site.caller, t}, CallSiteRef{site.site.caller, site.index, site.site.line});
  }
  std::vector<TplTarget> out;
  for (auto& [key, ref] : first) out.push_back({key, ref});
  return out;
}

std::optional<CallPath> find_entry_path(const CallGraph& graph, const TplTarget& target) {
  auto callers = index_callers(graph);
  auto routes = entry_routes(callers, graph.entry_points, target.key.direct_caller, true);
  if (routes.empty()) return std::nullopt;
  return make_path(std::move(routes.front()), target);
}

std::vector<CallPath> enumerate_paths(const ProjectModel& model, const CallGraph& graph) {
  auto callers = index_callers(graph);
  std::map<std::string, std::vector<std::vector<std::string>>> by_caller;
  std::vector<CallPath> paths;
  for (const auto& target : tpl_targets(model)) {
    auto it = by_caller.find(target.key.direct_caller);
    if (it == by_caller.end())
      it = by_caller
               .emplace(target.key.direct_caller,
                        entry_routes(callers, graph.entry_points, target.key.direct_caller, false))
               .first;
    for (const auto& route : it->second) paths.push_back(make_path(route, target));
  }
  sort_generation_queue(paths);
  return paths;
}

void sort_generation_queue(std::vector<CallPath>& paths) {
  std::stable_sort(paths.begin(), paths.end(), [](const CallPath& a, const CallPath& b) {
    return std::tie(a.length, a.direct_caller, a.target, a.entry) <
           std::tie(b.length, b.direct_caller, b.target, b.entry);
  });
}

std::string dump_edges(const CallGraph& graph) {
  std::vector<std::string> lines;
  for (const auto& e : graph.edges) lines.push_back(e.from + " -> " + e.to + " @" + std::to_string(e.line));
  std::sort(lines.begin(), lines.end());
  std::ostringstream out;
  for (const auto& l : lines) out << l << '\n';
  return out.str();
}

}  // namespace tplreach
