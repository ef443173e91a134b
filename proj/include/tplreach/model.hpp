#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tplreach {

enum class Visibility { Public, Protected, Package, Private };
enum class Dispatch { Virtual, Static, Constructor };

std::string_view to_string(Visibility v);
std::string_view to_string(Dispatch d);
std::optional<Visibility> parse_visibility(std::string_view text);
std::optional<Dispatch> parse_dispatch(std::string_view text);

struct LineRange {
  int start = 0;
  int end = 0;

  bool contains(int line) const { return line >= start && line <= end; }
  bool operator==(const LineRange&) const = default;
};

/// A direct invocation recorded inside a method body.
///
/// `target` is the invoked signature (`name(params)`). When `receiver_type` is
/// absent the target must be a complete method id (`pkg.Class.name(params)`);
/// this is how static calls without an explicit owner are written.
struct CallSite {
  std::string caller;
  std::optional<std::string> receiver_type;
  std::string target;
  int line = 0;
  Dispatch dispatch = Dispatch::Virtual;

  bool operator==(const CallSite&) const = default;
};

struct FieldDecl {
  std::string name;
  std::string type;

  bool operator==(const FieldDecl&) const = default;
};

struct MethodDecl {
  std::string id;
  Visibility visibility = Visibility::Package;
  bool is_static = false;
  bool is_constructor = false;
  bool is_factory = false;
  bool is_setter = false;
  LineRange lines;
  std::vector<CallSite> calls;

  bool operator==(const MethodDecl&) const = default;
};

struct ClassDecl {
  std::string fq_name;
  std::vector<std::string> supertypes;
  bool is_project_class = true;
  std::optional<std::string> file;
  std::vector<std::string> imports;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  // Coordinate of the dependency that ships this class, when known.
  std::optional<std::string> dependency;

  bool operator==(const ClassDecl&) const = default;
};

struct DependencyDecl {
  std::string coordinate;
  std::string version;
  bool direct = true;
  std::string scope;

  bool operator==(const DependencyDecl&) const = default;
};

/// Plain, unvalidated model content. Parsers fill one of these and hand it to
/// ProjectModel::create, which is the only way to obtain a ProjectModel.
struct ModelData {
  std::string project_id;
  std::vector<DependencyDecl> dependencies;
  std::vector<ClassDecl> classes;
  std::map<std::string, std::string> sources;

  bool operator==(const ModelData&) const = default;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural problem; `pointer` is a JSON pointer into the canonical form.
class SchemaError : public ModelError {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : ModelError(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

class ReferenceError : public ModelError {
 public:
  using ModelError::ModelError;
};

class CycleError : public ModelError {
 public:
  explicit CycleError(std::vector<std::string> cycle);
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

/// Immutable, validated code model. Safe to share between threads.
class ProjectModel {
 public:
  /// Validates every structural invariant and builds lookup indexes.
  /// Throws SchemaError, ReferenceError or CycleError.
  static ProjectModel create(ModelData data);

  const ModelData& data() const { return data_; }
  const std::string& project_id() const { return data_.project_id; }
  const std::vector<ClassDecl>& classes() const { return data_.classes; }
  const std::vector<DependencyDecl>& dependencies() const { return data_.dependencies; }
  const std::map<std::string, std::string>& sources() const { return data_.sources; }

  const ClassDecl* find_class(std::string_view fq_name) const;
  const MethodDecl* find_method(std::string_view method_id) const;
  /// Class declaring the given method id.
  const ClassDecl* owner_of(std::string_view method_id) const;

  bool is_project_method(std::string_view method_id) const;
  bool is_dependency_method(std::string_view method_id) const;

  /// Source split into lines (1-based access through index line-1), or
  /// nullopt when the file has no source text.
  std::optional<std::vector<std::string>> source_lines(std::string_view path) const;

  bool operator==(const ProjectModel& other) const { return data_ == other.data_; }

 private:
  explicit ProjectModel(ModelData data) : data_(std::move(data)) {}

  ModelData data_;
  std::unordered_map<std::string, std::size_t> class_index_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> method_index_;
};

/// `pkg.Outer$Inner` -> `Outer$Inner`.
std::string simple_class_name(std::string_view fq_name);
/// `pkg.Class.name(int)` -> `name(int)` given the owner `pkg.Class`.
std::string signature_of(std::string_view method_id, std::string_view owner);
/// `name(int)` or `pkg.Class.name(int)` -> `name`.
std::string method_name(std::string_view signature_or_id);

std::vector<std::string> split_lines(std::string_view text);

}  // namespace tplreach
