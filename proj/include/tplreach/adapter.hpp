#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tplreach {

class AdapterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AdapterAction { Compile, Run };
enum class AdapterStatus { Ok, CompileError, RuntimeError };
enum class DiagnosticLevel { Error, Warn, Info };

std::string_view to_string(AdapterAction a);
std::string_view to_string(AdapterStatus s);
std::string_view to_string(DiagnosticLevel l);

struct AdapterRequest {
  AdapterAction action = AdapterAction::Compile;
  std::string scenario_path;
  std::string project_root;
};

struct Diagnostic {
  DiagnosticLevel level = DiagnosticLevel::Info;
  std::string message;
  std::optional<int> line;

  bool operator==(const Diagnostic&) const = default;
};

struct AdapterResponse {
  AdapterStatus status = AdapterStatus::Ok;
  std::vector<Diagnostic> diagnostics;
  std::optional<std::string> lcov;  // only for run

  bool operator==(const AdapterResponse&) const = default;
};

nlohmann::json request_to_json(const AdapterRequest& request);
AdapterRequest request_from_json(const nlohmann::json& doc);
nlohmann::json response_to_json(const AdapterResponse& response);
/// Throws AdapterError on anything that does not follow the protocol.
AdapterResponse response_from_json(const nlohmann::json& doc);

/// Compiles and runs scenario files for one concrete ecosystem. Implementations
/// must tolerate concurrent calls.
class ExecutionAdapter {
 public:
  virtual ~ExecutionAdapter() = default;
  virtual AdapterResponse execute(const AdapterRequest& request) = 0;
};

/// Spawns `command` through /bin/sh once per request, feeds the JSON request
/// on stdin and reads one JSON response from stdout. A non-zero exit status or
/// an unparsable response raises AdapterError.
class ProcessAdapter : public ExecutionAdapter {
 public:
  explicit ProcessAdapter(std::string command) : command_(std::move(command)) {}
  AdapterResponse execute(const AdapterRequest& request) override;

 private:
  std::string command_;
};

}  // namespace tplreach
