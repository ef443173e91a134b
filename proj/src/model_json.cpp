#include "tplreach/model_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tplreach/fixture_dsl.hpp"

namespace tplreach {

using nlohmann::json;

namespace {

std::string kind_of(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return "null";
    case json::value_t::object:
      return "object";
    case json::value_t::array:
      return "array";
    case json::value_t::string:
      return "string";
    case json::value_t::boolean:
      return "boolean";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      return "integer";
    case json::value_t::number_float:
      return "number";
    default:
      return "value";
  }
}

std::string escape_token(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

// Cursor over one JSON object that tracks its pointer and the fields that
// have been consumed, so leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string pointer) : j_(j), pointer_(std::move(pointer)) {
    if (!j_.is_object()) throw SchemaError(at(), "expected object, found " + kind_of(j_));
  }

  const std::string& pointer() const { return pointer_; }
  std::string field_pointer(std::string_view key) const {
    return pointer_ + "/" + escape_token(key);
  }

  const json& required(std::string_view key) {
    seen_.emplace_back(key);
    auto it = j_.find(std::string(key));
    if (it == j_.end()) throw SchemaError(field_pointer(key), "missing required field");
    return *it;
  }

  const json* optional(std::string_view key) {
    seen_.emplace_back(key);
    auto it = j_.find(std::string(key));
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string string(std::string_view key) {
    const auto& v = required(key);
    if (!v.is_string()) throw SchemaError(field_pointer(key), "expected string, found " + kind_of(v));
    return v.get<std::string>();
  }

  std::optional<std::string> optional_string(std::string_view key) {
    const auto* v = optional(key);
    if (!v) return std::nullopt;
    if (!v->is_string())
      throw SchemaError(field_pointer(key), "expected string, found " + kind_of(*v));
    return v->get<std::string>();
  }

  bool boolean(std::string_view key) {
    const auto& v = required(key);
    if (!v.is_boolean())
      throw SchemaError(field_pointer(key), "expected boolean, found " + kind_of(v));
    return v.get<bool>();
  }

  int integer(std::string_view key) {
    const auto& v = required(key);
    if (!v.is_number_integer())
      throw SchemaError(field_pointer(key), "expected integer, found " + kind_of(v));
    auto value = v.get<long long>();
    if (value < 0 || value > 1'000'000'000)
      throw SchemaError(field_pointer(key), "line number out of range");
    return static_cast<int>(value);
  }

  const json& array(std::string_view key) {
    const auto& v = required(key);
    if (!v.is_array()) throw SchemaError(field_pointer(key), "expected array, found " + kind_of(v));
    return v;
  }

  std::vector<std::string> string_array(std::string_view key) {
    const auto& arr = array(key);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string())
        throw SchemaError(field_pointer(key) + "/" + std::to_string(i),
                          "expected string, found " + kind_of(arr[i]));
      out.push_back(arr[i].get<std::string>());
    }
    return out;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        throw SchemaError(field_pointer(it.key()), "unknown field");
    }
  }

 private:
  std::string at() const { return pointer_.empty() ? "/" : pointer_; }

  const json& j_;
  std::string pointer_;
  std::vector<std::string> seen_;
};

CallSite read_call(const json& j, const std::string& pointer) {
  ObjectReader r(j, pointer);
  CallSite call;
  call.receiver_type = r.optional_string("receiver_type");
  call.target = r.string("target");
  call.line = r.integer("line");
  auto dispatch = r.string("dispatch");
  auto parsed = parse_dispatch(dispatch);
  if (!parsed) throw SchemaError(r.field_pointer("dispatch"), "unknown dispatch '" + dispatch + "'");
  call.dispatch = *parsed;
  r.finish();
  return call;
}

MethodDecl read_method(const json& j, const std::string& pointer) {
  ObjectReader r(j, pointer);
  MethodDecl m;
  m.id = r.string("id");
  auto vis = r.string("visibility");
  auto parsed = parse_visibility(vis);
  if (!parsed) throw SchemaError(r.field_pointer("visibility"), "unknown visibility '" + vis + "'");
  m.visibility = *parsed;
  m.is_static = r.boolean("is_static");
  m.is_constructor = r.boolean("is_constructor");
  m.is_factory = r.boolean("is_factory");
  m.is_setter = r.boolean("is_setter");
  m.lines.start = r.integer("line_start");
  m.lines.end = r.integer("line_end");
  const auto& calls = r.array("calls");
  for (std::size_t i = 0; i < calls.size(); ++i)
    m.calls.push_back(read_call(calls[i], r.field_pointer("calls") + "/" + std::to_string(i)));
  r.finish();
  return m;
}

ClassDecl read_class(const json& j, const std::string& pointer) {
  ObjectReader r(j, pointer);
  ClassDecl c;
  c.fq_name = r.string("fq_name");
  c.supertypes = r.string_array("supertypes");
  c.is_project_class = r.boolean("is_project_class");
  c.file = r.optional_string("file");
  c.imports = r.string_array("imports");
  c.dependency = r.optional_string("dependency");
  const auto& fields = r.array("fields");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    ObjectReader f(fields[i], r.field_pointer("fields") + "/" + std::to_string(i));
    c.fields.push_back({f.string("name"), f.string("type")});
    f.finish();
  }
  const auto& methods = r.array("methods");
  for (std::size_t i = 0; i < methods.size(); ++i)
    c.methods.push_back(read_method(methods[i], r.field_pointer("methods") + "/" + std::to_string(i)));
  r.finish();
  return c;
}

}  // namespace

ProjectModel model_from_json(const json& doc) {
  ObjectReader root(doc, "");
  ModelData data;
  data.project_id = root.string("project_id");

  const auto& deps = root.array("dependencies");
  for (std::size_t i = 0; i < deps.size(); ++i) {
    ObjectReader r(deps[i], "/dependencies/" + std::to_string(i));
    DependencyDecl dep;
    dep.coordinate = r.string("coordinate");
    dep.version = r.string("version");
    dep.direct = r.boolean("direct");
    dep.scope = r.string("scope");
    r.finish();
    data.dependencies.push_back(std::move(dep));
  }

  const auto& classes = root.array("classes");
  for (std::size_t i = 0; i < classes.size(); ++i)
    data.classes.push_back(read_class(classes[i], "/classes/" + std::to_string(i)));

  const auto& sources = root.required("sources");
  if (!sources.is_object())
    throw SchemaError("/sources", "expected object, found " + kind_of(sources));
  for (auto it = sources.begin(); it != sources.end(); ++it) {
    if (!it->is_string())
      throw SchemaError("/sources/" + escape_token(it.key()), "expected string, found " + kind_of(*it));
    data.sources.emplace(it.key(), it->get<std::string>());
  }
  root.finish();

  return ProjectModel::create(std::move(data));
}

ProjectModel parse_model_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("invalid JSON: ") + e.what());
  }
  return model_from_json(doc);
}

json model_to_json(const ProjectModel& model) {
  const auto& d = model.data();
  json doc;
  doc["project_id"] = d.project_id;
  doc["dependencies"] = json::array();
  for (const auto& dep : d.dependencies) {
    doc["dependencies"].push_back({{"coordinate", dep.coordinate},
                                   {"version", dep.version},
                                   {"direct", dep.direct},
                                   {"scope", dep.scope}});
  }
  doc["classes"] = json::array();
  for (const auto& c : d.classes) {
    json cls;
    cls["fq_name"] = c.fq_name;
    cls["supertypes"] = c.supertypes;
    cls["is_project_class"] = c.is_project_class;
    cls["file"] = c.file ? json(*c.file) : json(nullptr);
    cls["imports"] = c.imports;
    if (c.dependency) cls["dependency"] = *c.dependency;
    cls["fields"] = json::array();
    for (const auto& f : c.fields) cls["fields"].push_back({{"name", f.name}, {"type", f.type}});
    cls["methods"] = json::array();
    for (const auto& m : c.methods) {
      json method;
      method["id"] = m.id;
      method["visibility"] = std::string(to_string(m.visibility));
      method["is_static"] = m.is_static;
      method["is_constructor"] = m.is_constructor;
      method["is_factory"] = m.is_factory;
      method["is_setter"] = m.is_setter;
      method["line_start"] = m.lines.start;
      method["line_end"] = m.lines.end;
      method["calls"] = json::array();
      for (const auto& call : m.calls) {
        method["calls"].push_back(
            {{"receiver_type", call.receiver_type ? json(*call.receiver_type) : json(nullptr)},
             {"target", call.target},
             {"line", call.line},
             {"dispatch", std::string(to_string(call.dispatch))}});
      }
      cls["methods"].push_back(std::move(method));
    }
    doc["classes"].push_back(std::move(cls));
  }
  doc["sources"] = json::object();
  for (const auto& [path, text] : d.sources) doc["sources"][path] = text;
  return doc;
}

std::string dump_model_json(const ProjectModel& model) { return model_to_json(model).dump(2) + "\n"; }

ProjectModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return parse_model_json(text);
  return parse_fixture_dsl(text);
}

}  // namespace tplreach
