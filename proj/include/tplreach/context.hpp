#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tplreach/callgraph.hpp"
#include "tplreach/model.hpp"

namespace tplreach {

struct AnnotatedSnippet {
  std::string method_id;
  std::string text;

  bool operator==(const AnnotatedSnippet&) const = default;
};

struct SnippetExtraction {
  std::vector<AnnotatedSnippet> snippets;  // hop order
  std::vector<std::string> missing_sources;
};

/// Material needed to instantiate the entry point's class and call it.
struct EntryContext {
  std::vector<std::string> constructors;
  std::vector<std::string> factories;
  std::vector<std::string> setters;
  std::vector<std::string> fields;  // "type name"
  std::vector<std::string> imports;
  bool hard_to_instantiate = false;
};

struct ContextBundle {
  CallPath path;
  std::vector<AnnotatedSnippet> snippets;
  EntryContext entry;
  bool degraded = false;
  std::vector<std::string> notes;
};

/// The PATH marker placed above a line that advances to `callee_id`.
std::string path_comment(const ProjectModel& model, const std::string& callee_id);

/// Method sources along the path, each with a PATH marker above every line
/// whose call dispatches to the next hop (or to the tpl target for the last
/// hop). Hops without source get a placeholder and are listed as missing.
SnippetExtraction extract_snippets(const ProjectModel& model, const CallPath& path);

/// Constructors, factories (only when no public constructor exists), setters,
/// fields, and the class imports that the collected snippets mention.
EntryContext extract_entry_context(const ProjectModel& model, const std::string& entry);

ContextBundle extract_context(const ProjectModel& model, const CallPath& path);

nlohmann::json bundle_to_json(const ContextBundle& bundle);

}  // namespace tplreach
