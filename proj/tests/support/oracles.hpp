#pragma once

// Independent reference implementations used to cross-check the library.
// They favour obviousness over speed and share no code with src/.

#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tplreach/model.hpp"

namespace oracle {

using Rng = std::mt19937;

/// Random hierarchy of at most `max_classes` classes (some of them dependency
/// classes) with at most `max_sites` call sites spread over project methods.
tplreach::ModelData random_hierarchy(Rng& rng, int max_classes = 10, int max_sites = 20);

/// (caller, callee, line, call index) for every dispatch a concrete receiver
/// could take, found by checking every class against every call site.
using Edge = std::tuple<std::string, std::string, int, std::size_t>;
std::set<Edge> brute_force_edges(const tplreach::ModelData& model);

/// A single class `g.G` with `nodes` static methods m0..m{n-1} wired by random
/// calls, plus one dependency call from a random method.
struct RandomGraph {
  tplreach::ModelData model;
  std::vector<std::string> methods;
  std::vector<bool> is_public;
  std::set<std::pair<int, int>> edges;  // caller index -> callee index
  int direct_caller = 0;
  std::string tpl_method;
};
RandomGraph random_call_graph(Rng& rng, int max_nodes = 8);

/// Every simple path from a public method to the direct caller, as node
/// indices (entry first).
std::vector<std::vector<int>> all_entry_paths(const RandomGraph& g);

/// Shortest entry path length (number of methods) or 0 when none exists.
std::size_t min_entry_path_length(const RandomGraph& g);

/// Entries reachable from the direct caller in reverse without passing
/// through another public method, each with its shortest such length.
std::vector<std::pair<std::string, std::size_t>> unshadowed_entries(const RandomGraph& g);

}  // namespace oracle
