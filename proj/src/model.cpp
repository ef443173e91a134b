#include "tplreach/model.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace tplreach {

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Public:
      return "public";
    case Visibility::Protected:
      return "protected";
    case Visibility::Package:
      return "package";
    case Visibility::Private:
      return "private";
  }
  return "package";
}

std::string_view to_string(Dispatch d) {
  switch (d) {
    case Dispatch::Virtual:
      return "virtual";
    case Dispatch::Static:
      return "static";
    case Dispatch::Constructor:
      return "constructor";
  }
  return "virtual";
}

std::optional<Visibility> parse_visibility(std::string_view text) {
  if (text == "public") return Visibility::Public;
  if (text == "protected") return Visibility::Protected;
  if (text == "package") return Visibility::Package;
  if (text == "private") return Visibility::Private;
  return std::nullopt;
}

std::optional<Dispatch> parse_dispatch(std::string_view text) {
  if (text == "virtual") return Dispatch::Virtual;
  if (text == "static") return Dispatch::Static;
  if (text == "constructor") return Dispatch::Constructor;
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool well_formed_signature(std::string_view sig) {
  auto open = sig.find('(');
  return open != std::string_view::npos && open > 0 && sig.back() == ')' &&
         sig.find('(', open + 1) == std::string_view::npos;
}

std::string method_pointer(std::size_t c, std::size_t m) {
  return "/classes/" + std::to_string(c) + "/methods/" + std::to_string(m);
}

// Iterative three-colour DFS over supertype edges. Returns the first cycle
// found, rotated so that its smallest member comes first.
std::optional<std::vector<std::string>> find_supertype_cycle(const ModelData& data) {
  std::unordered_map<std::string, const ClassDecl*> by_name;
  for (const auto& c : data.classes) by_name.emplace(c.fq_name, &c);

  enum class Colour { White, Grey, Black };
  std::unordered_map<std::string, Colour> colour;
  for (const auto& c : data.classes) colour[c.fq_name] = Colour::White;

  for (const auto& root : data.classes) {
    if (colour[root.fq_name] != Colour::White) continue;
    // (class, next supertype index)
    std::vector<std::pair<const ClassDecl*, std::size_t>> stack{{&root, 0}};
    colour[root.fq_name] = Colour::Grey;
    while (!stack.empty()) {
      auto& [cls, next] = stack.back();
      if (next == cls->supertypes.size()) {
        colour[cls->fq_name] = Colour::Black;
        stack.pop_back();
        continue;
      }
      const std::string& super = cls->supertypes[next++];
      auto it = by_name.find(super);
      if (it == by_name.end()) continue;
      if (colour[super] == Colour::Grey) {
        std::vector<std::string> cycle;
        auto start = std::find_if(stack.begin(), stack.end(),
                                  [&](const auto& e) { return e.first->fq_name == super; });
        for (auto s = start; s != stack.end(); ++s) cycle.push_back(s->first->fq_name);
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
        return cycle;
      }
      if (colour[super] == Colour::White) {
        colour[super] = Colour::Grey;
        stack.emplace_back(it->second, 0);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : ModelError("supertype cycle: " + join(cycle, " -> ") + " -> " +
                 (cycle.empty() ? std::string() : cycle.front())),
      cycle_(std::move(cycle)) {}

ProjectModel ProjectModel::create(ModelData data) {
  if (data.project_id.empty()) throw SchemaError("/project_id", "must be a non-empty string");

  std::set<std::string> coordinates;
  for (std::size_t i = 0; i < data.dependencies.size(); ++i) {
    const auto& dep = data.dependencies[i];
    const std::string ptr = "/dependencies/" + std::to_string(i) + "/coordinate";
    if (dep.coordinate.empty()) throw SchemaError(ptr, "must be a non-empty string");
    if (!coordinates.insert(dep.coordinate).second)
      throw SchemaError(ptr, "duplicate dependency coordinate '" + dep.coordinate + "'");
  }

  ProjectModel model(std::move(data));
  auto& d = model.data_;

  for (std::size_t c = 0; c < d.classes.size(); ++c) {
    auto& cls = d.classes[c];
    const std::string cptr = "/classes/" + std::to_string(c);
    if (cls.fq_name.empty()) throw SchemaError(cptr + "/fq_name", "must be a non-empty string");
    if (!model.class_index_.emplace(cls.fq_name, c).second)
      throw SchemaError(cptr + "/fq_name", "duplicate class '" + cls.fq_name + "'");
    if (cls.is_project_class && !cls.file)
      throw SchemaError(cptr + "/file", "project class '" + cls.fq_name + "' needs a source file");
    if (cls.is_project_class && cls.dependency)
      throw SchemaError(cptr + "/dependency", "project classes cannot belong to a dependency");

    for (std::size_t m = 0; m < cls.methods.size(); ++m) {
      auto& method = cls.methods[m];
      const std::string mptr = method_pointer(c, m);
      const std::string prefix = cls.fq_name + ".";
      if (method.id.size() <= prefix.size() || method.id.compare(0, prefix.size(), prefix) != 0 ||
          !well_formed_signature(std::string_view(method.id).substr(prefix.size())))
        throw SchemaError(mptr + "/id", "method id '" + method.id + "' must be '" + prefix +
                                            "name(params)'");
      if (!model.method_index_.emplace(method.id, std::make_pair(c, m)).second)
        throw SchemaError(mptr + "/id", "duplicate method id '" + method.id + "'");
      if (method.lines.start > method.lines.end)
        throw SchemaError(mptr + "/line_start", "line_start exceeds line_end");
      if (method.is_factory && !method.is_static)
        throw SchemaError(mptr + "/is_factory", "factory methods must be static");
      if (!cls.is_project_class && !method.calls.empty())
        throw SchemaError(mptr + "/calls", "dependency method bodies are not modelled");

      for (std::size_t k = 0; k < method.calls.size(); ++k) {
        auto& call = method.calls[k];
        const std::string kptr = mptr + "/calls/" + std::to_string(k);
        call.caller = method.id;
        if (!method.lines.contains(call.line))
          throw SchemaError(kptr + "/line", "call line " + std::to_string(call.line) +
                                                " outside method range " +
                                                std::to_string(method.lines.start) + "-" +
                                                std::to_string(method.lines.end));
        if (!well_formed_signature(call.target))
          throw SchemaError(kptr + "/target", "target '" + call.target + "' is not a signature");
        if (!call.receiver_type && call.dispatch == Dispatch::Virtual)
          throw SchemaError(kptr + "/receiver_type", "virtual calls need a declared receiver type");
      }
    }
  }

  for (std::size_t c = 0; c < d.classes.size(); ++c) {
    const auto& cls = d.classes[c];
    for (const auto& super : cls.supertypes) {
      if (!model.class_index_.contains(super))
        throw ReferenceError("class '" + cls.fq_name + "' extends unknown class '" + super + "'");
    }
    if (cls.dependency && !coordinates.contains(*cls.dependency))
      throw ReferenceError("class '" + cls.fq_name + "' belongs to undeclared dependency '" +
                           *cls.dependency + "'");
  }

  if (auto cycle = find_supertype_cycle(d)) throw CycleError(std::move(*cycle));
  return model;
}

const ClassDecl* ProjectModel::find_class(std::string_view fq_name) const {
  auto it = class_index_.find(std::string(fq_name));
  return it == class_index_.end() ? nullptr : &data_.classes[it->second];
}

const MethodDecl* ProjectModel::find_method(std::string_view method_id) const {
  auto it = method_index_.find(std::string(method_id));
  if (it == method_index_.end()) return nullptr;
  return &data_.classes[it->second.first].methods[it->second.second];
}

const ClassDecl* ProjectModel::owner_of(std::string_view method_id) const {
  auto it = method_index_.find(std::string(method_id));
  return it == method_index_.end() ? nullptr : &data_.classes[it->second.first];
}

bool ProjectModel::is_project_method(std::string_view method_id) const {
  const auto* owner = owner_of(method_id);
  return owner && owner->is_project_class;
}

bool ProjectModel::is_dependency_method(std::string_view method_id) const {
  const auto* owner = owner_of(method_id);
  return owner && !owner->is_project_class;
}

std::optional<std::vector<std::string>> ProjectModel::source_lines(std::string_view path) const {
  auto it = data_.sources.find(std::string(path));
  if (it == data_.sources.end()) return std::nullopt;
  return split_lines(it->second);
}

std::string simple_class_name(std::string_view fq_name) {
  auto dot = fq_name.rfind('.');
  return std::string(dot == std::string_view::npos ? fq_name : fq_name.substr(dot + 1));
}

std::string signature_of(std::string_view method_id, std::string_view owner) {
  if (method_id.size() > owner.size() && method_id.substr(0, owner.size()) == owner &&
      method_id[owner.size()] == '.')
    return std::string(method_id.substr(owner.size() + 1));
  return std::string(method_id);
}

std::string method_name(std::string_view signature_or_id) {
  auto head = signature_or_id.substr(0, signature_or_id.find('('));
  auto dot = head.rfind('.');
  return std::string(dot == std::string_view::npos ? head : head.substr(dot + 1));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace tplreach
