#include "tplreach/context.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "tplreach/hierarchy.hpp"

namespace tplreach {

namespace {

std::optional<std::string> method_source(const ProjectModel& model, const MethodDecl& method) {
  const auto* owner = model.owner_of(method.id);
  if (!owner || !owner->file) return std::nullopt;
  auto lines = model.source_lines(*owner->file);
  if (!lines || method.lines.start < 1 || method.lines.end > static_cast<int>(lines->size()))
    return std::nullopt;
  std::string text;
  for (int l = method.lines.start; l <= method.lines.end; ++l) {
    text += (*lines)[l - 1];
    text += '\n';
  }
  return text;
}

std::string indentation_of(const std::string& line) {
  return line.substr(0, line.find_first_not_of(" \t") == std::string::npos ? line.size()
                                                                            : line.find_first_not_of(" \t"));
}

bool mentions_identifier(const std::string& text, const std::string& ident) {
  if (ident.empty()) return false;
  auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  for (auto pos = text.find(ident); pos != std::string::npos; pos = text.find(ident, pos + 1)) {
    bool left = pos == 0 || !is_word(text[pos - 1]);
    bool right = pos + ident.size() == text.size() || !is_word(text[pos + ident.size()]);
    if (left && right) return true;
  }
  return false;
}

// `a.b.Outer$Inner` or `a.b.Outer.Inner` -> `Inner`.
std::string import_simple_name(const std::string& import) {
  auto cut = import.find_last_of(".$");
  return cut == std::string::npos ? import : import.substr(cut + 1);
}

}  // namespace

std::string path_comment(const ProjectModel& model, const std::string& callee_id) {
  const auto* owner = model.owner_of(callee_id);
  std::string cls = owner ? simple_class_name(owner->fq_name) : std::string("?");
  return "// PATH: Test should invoke the next " + cls + "." + method_name(callee_id) +
         "(...) [step in execution path]";
}

SnippetExtraction extract_snippets(const ProjectModel& model, const CallPath& path) {
  ClassHierarchy hierarchy(model);
  SnippetExtraction out;
  for (std::size_t i = 0; i < path.hops.size(); ++i) {
    const std::string& hop = path.hops[i];
    const std::string& next = i + 1 < path.hops.size() ? path.hops[i + 1] : path.target;
    const auto* method = model.find_method(hop);
    auto source = method ? method_source(model, *method) : std::nullopt;
    if (!source) {
      out.missing_sources.push_back(hop);
      out.snippets.push_back({hop, "// source unavailable for " + hop + "\n"});
      continue;
    }

    std::set<int> advancing;
    for (const auto& call : method->calls) {
      auto res = hierarchy.dispatch_targets(call);
      if (std::find(res.targets.begin(), res.targets.end(), next) != res.targets.end())
        advancing.insert(call.line);
    }

    const std::string marker = path_comment(model, next);
    std::string text;
    auto lines = split_lines(*source);
    for (std::size_t k = 0; k < lines.size(); ++k) {
      int line_no = method->lines.start + static_cast<int>(k);
      if (advancing.contains(line_no)) text += indentation_of(lines[k]) + marker + "\n";
      text += lines[k] + "\n";
    }
    out.snippets.push_back({hop, std::move(text)});
  }
  return out;
}

EntryContext extract_entry_context(const ProjectModel& model, const std::string& entry) {
  EntryContext ctx;
  const auto* cls = model.owner_of(entry);
  const auto* entry_method = model.find_method(entry);
  if (!cls || !entry_method) return ctx;

  auto snippet = [&](const MethodDecl& m) {
    return method_source(model, m).value_or("// source unavailable for " + m.id + "\n");
  };

  for (const auto& m : cls->methods)
    if (m.is_constructor && m.visibility == Visibility::Public) ctx.constructors.push_back(snippet(m));
  if (ctx.constructors.empty()) {
    for (const auto& m : cls->methods)
      if (m.is_factory && m.visibility == Visibility::Public) ctx.factories.push_back(snippet(m));
  }
  for (const auto& m : cls->methods)
    if (m.is_setter) ctx.setters.push_back(snippet(m));
  for (const auto& f : cls->fields) ctx.fields.push_back(f.type + " " + f.name);

  std::string referenced = snippet(*entry_method);
  for (const auto* group : {&ctx.constructors, &ctx.factories, &ctx.setters, &ctx.fields})
    for (const auto& s : *group) referenced += s + "\n";
  for (const auto& imp : cls->imports)
    if (mentions_identifier(referenced, import_simple_name(imp))) ctx.imports.push_back(imp);

  ctx.hard_to_instantiate = !entry_method->is_static && ctx.constructors.empty() && ctx.factories.empty();
  return ctx;
}

ContextBundle extract_context(const ProjectModel& model, const CallPath& path) {
  ContextBundle bundle;
  bundle.path = path;
  auto snippets = extract_snippets(model, path);
  bundle.snippets = std::move(snippets.snippets);
  bundle.entry = extract_entry_context(model, path.entry);
  bundle.degraded = !snippets.missing_sources.empty();
  for (const auto& id : snippets.missing_sources) bundle.notes.push_back("missing source for " + id);
  if (bundle.entry.hard_to_instantiate)
    bundle.notes.push_back("entry class has no public constructor or factory method");
  return bundle;
}

nlohmann::json bundle_to_json(const ContextBundle& bundle) {
  nlohmann::json snippets = nlohmann::json::array();
  for (const auto& s : bundle.snippets) snippets.push_back({{"method", s.method_id}, {"text", s.text}});
  return {{"path", bundle.path.hops},
          {"target", bundle.path.target},
          {"snippets", snippets},
          {"constructors", bundle.entry.constructors},
          {"factories", bundle.entry.factories},
          {"setters", bundle.entry.setters},
          {"fields", bundle.entry.fields},
          {"imports", bundle.entry.imports},
          {"hard_to_instantiate", bundle.entry.hard_to_instantiate},
          {"degraded", bundle.degraded},
          {"notes", bundle.notes}};
}

}  // namespace tplreach
