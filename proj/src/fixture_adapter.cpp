#include "tplreach/fixture_adapter.hpp"

#include <deque>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "tplreach/coverage.hpp"

namespace tplreach {

namespace {

const std::set<std::string>& builtin_types() {
  static const std::set<std::string> names = {
      "Object",       "String",           "StringBuilder", "Integer",         "Long",
      "Double",       "Float",            "Boolean",       "Character",       "Byte",
      "Short",        "Math",             "System",        "Arrays",          "Collections",
      "List",         "ArrayList",        "Map",           "HashMap",         "Set",
      "HashSet",      "Optional",         "Thread",        "Exception",       "RuntimeException",
      "IOException",  "IllegalArgumentException",          "IllegalStateException"};
  return names;
}

struct ScenarioLine {
  int number;
  std::string code;
};

struct Scenario {
  std::vector<ScenarioLine> lines;
  std::set<std::string> imported;
};

Scenario preprocess(const std::string& text) {
  Scenario s;
  auto raw = split_lines(text);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::string code = raw[i];
    if (auto c = code.find("//"); c != std::string::npos) code.erase(c);
    auto first = code.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::string_view trimmed = std::string_view(code).substr(first);
    if (trimmed.starts_with("package ")) continue;
    if (trimmed.starts_with("import ")) {
      std::string name(trimmed.substr(7));
      if (name.starts_with("static ")) name.erase(0, 7);
      while (!name.empty() && (name.back() == ';' || name.back() == ' ')) name.pop_back();
      auto cut = name.find_last_of(".$");
      s.imported.insert(cut == std::string::npos ? name : name.substr(cut + 1));
      continue;
    }
    s.lines.push_back({static_cast<int>(i + 1), code});
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::regex& call_pattern() {
  // new Type(   |   receiver.method(
  static const std::regex re(R"(\bnew\s+([A-Z][\w$]*)\s*(?:<[^>]*>)?\s*\(|\b([A-Za-z_][\w$]*)\s*\.\s*([A-Za-z_]\w*)\s*\()");
  return re;
}

}  // namespace

FixtureAdapter::FixtureAdapter(ProjectModel model) : model_(std::move(model)), graph_(build_cha(model_)) {
  for (const auto& c : model_.classes()) {
    auto simple = simple_class_name(c.fq_name);
    by_simple_name_[simple].push_back(c.fq_name);
    if (auto dollar = simple.rfind('$'); dollar != std::string::npos)
      by_simple_name_[simple.substr(dollar + 1)].push_back(c.fq_name);
  }
}

std::vector<std::string> FixtureAdapter::classes_named(const std::string& simple) const {
  auto it = by_simple_name_.find(simple);
  return it == by_simple_name_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> FixtureAdapter::methods_named(const std::string& fq_class, const std::string& name) const {
  std::deque<std::string> work{fq_class};
  std::set<std::string> seen;
  while (!work.empty()) {
    auto cur = work.front();
    work.pop_front();
    if (!seen.insert(cur).second) continue;
    const auto* cls = model_.find_class(cur);
    if (!cls) continue;
    std::vector<std::string> found;
    for (const auto& m : cls->methods)
      if (!m.is_constructor && method_name(m.id) == name) found.push_back(m.id);
    if (!found.empty()) return found;
    for (const auto& s : cls->supertypes) work.push_back(s);
  }
  return {};
}

AdapterResponse FixtureAdapter::compile_text(const std::string& text) const {
  AdapterResponse response;
  auto scenario = preprocess(text);
  auto known_external = [&](const std::string& name) {
    return scenario.imported.contains(name) || builtin_types().contains(name);
  };
  for (const auto& line : scenario.lines) {
    for (std::sregex_iterator it(line.code.begin(), line.code.end(), call_pattern()), end; it != end; ++it) {
      const auto& m = *it;
      std::string type = m[1].matched ? m[1].str() : m[2].str();
      if (type.empty() || !std::isupper(static_cast<unsigned char>(type.front()))) continue;
      auto classes = classes_named(type);
      if (classes.empty()) {
        if (!known_external(type))
          response.diagnostics.push_back(
              {DiagnosticLevel::Error, "cannot find symbol: class " + type, line.number});
        continue;
      }
      if (m[3].matched) {
        bool defined = false;
        for (const auto& c : classes) defined = defined || !methods_named(c, m[3].str()).empty();
        if (!defined)
          response.diagnostics.push_back({DiagnosticLevel::Error,
                                          "cannot find symbol: method " + m[3].str() + " in class " + type,
                                          line.number});
      }
    }
  }
  bool failed = !response.diagnostics.empty();
  response.status = failed ? AdapterStatus::CompileError : AdapterStatus::Ok;
  response.diagnostics.push_back({DiagnosticLevel::Info,
                                  failed ? "compilation failed" : "compiled " + std::to_string(scenario.lines.size()) +
                                                                      " scenario lines",
                                  std::nullopt});
  return response;
}

AdapterResponse FixtureAdapter::run_text(const std::string& text) const {
  AdapterResponse response;
  auto scenario = preprocess(text);

  static const std::regex throw_re(R"re(^\s*throw\s+new\s+([\w$.]+)\s*\(\s*(?:"([^"]*)")?)re");
  static const std::regex decl_re(R"(\b([A-Z][\w$]*)(?:\s*<[^>]*>)?\s+([a-z_][\w$]*)\s*[=;])");

  std::map<std::string, std::string> var_types;
  std::set<std::string> roots;
  for (const auto& line : scenario.lines) {
    std::smatch t;
    if (std::regex_search(line.code, t, throw_re)) {
      response.status = AdapterStatus::RuntimeError;
      response.diagnostics.push_back({DiagnosticLevel::Error,
                                      "Exception in scenario: " + t[1].str() +
                                          (t[2].matched ? ": " + t[2].str() : std::string()),
                                      line.number});
      response.diagnostics.push_back({DiagnosticLevel::Info, "scenario aborted", std::nullopt});
      return response;
    }
    for (std::sregex_iterator it(line.code.begin(), line.code.end(), decl_re), end; it != end; ++it)
      var_types[(*it)[2].str()] = (*it)[1].str();

    for (std::sregex_iterator it(line.code.begin(), line.code.end(), call_pattern()), end; it != end; ++it) {
      const auto& m = *it;
      if (m[1].matched) {
        for (const auto& c : classes_named(m[1].str())) {
          const auto* cls = model_.find_class(c);
          for (const auto& method : cls->methods)
            if (method.is_constructor) roots.insert(method.id);
        }
        continue;
      }
      const std::string receiver = m[2].str();
      const std::string name = m[3].str();
      std::vector<std::string> owners;
      if (std::isupper(static_cast<unsigned char>(receiver.front()))) {
        owners = classes_named(receiver);
      } else if (auto v = var_types.find(receiver); v != var_types.end()) {
        owners = classes_named(v->second);
      }
      if (!owners.empty()) {
        for (const auto& o : owners)
          for (const auto& id : methods_named(o, name)) roots.insert(id);
      } else if (!var_types.contains(receiver)) {
        // Untyped receiver (var, lambda result): any project method of that name.
        for (const auto& cls : model_.classes())
          if (cls.is_project_class)
            for (const auto& method : cls.methods)
              if (!method.is_constructor && method_name(method.id) == name) roots.insert(method.id);
      }
    }
  }

  std::map<std::string, std::vector<std::string>> callees;
  for (const auto& e : graph_.edges) callees[e.from].push_back(e.to);
  std::set<std::string> executed;
  std::deque<std::string> work(roots.begin(), roots.end());
  while (!work.empty()) {
    auto cur = work.front();
    work.pop_front();
    if (!executed.insert(cur).second) continue;
    for (const auto& next : callees[cur]) work.push_back(next);
  }

  CoverageMap coverage(Provenance::ScenarioRun);
  for (const auto& id : executed) {
    const auto* method = model_.find_method(id);
    auto file = file_of_method(model_, id);
    if (!method || !file || !model_.is_project_method(id)) continue;
    for (int l = method->lines.start; l <= method->lines.end; ++l) coverage.add(*file, l, 1);
  }
  response.status = AdapterStatus::Ok;
  response.diagnostics.push_back(
      {DiagnosticLevel::Info, "executed " + std::to_string(executed.size()) + " methods", std::nullopt});
  response.lcov = to_lcov(coverage);
  return response;
}

AdapterResponse FixtureAdapter::execute(const AdapterRequest& request) {
  std::ifstream probe(request.scenario_path);
  if (!probe) {
    return {AdapterStatus::CompileError,
            {{DiagnosticLevel::Error, "scenario file not found: " + request.scenario_path, std::nullopt}},
            std::nullopt};
  }
  const std::string text = read_file(request.scenario_path);
  if (request.action == AdapterAction::Compile) return compile_text(text);
  auto compiled = compile_text(text);
  if (compiled.status != AdapterStatus::Ok) return compiled;
  return run_text(text);
}

}  // namespace tplreach
