#include "tplreach/adapter.hpp"

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>

extern char** environ;

namespace tplreach {

using nlohmann::json;

std::string_view to_string(AdapterAction a) { return a == AdapterAction::Compile ? "compile" : "run"; }

std::string_view to_string(AdapterStatus s) {
  switch (s) {
    case AdapterStatus::Ok:
      return "ok";
    case AdapterStatus::CompileError:
      return "compile_error";
    case AdapterStatus::RuntimeError:
      return "runtime_error";
  }
  return "ok";
}

std::string_view to_string(DiagnosticLevel l) {
  switch (l) {
    case DiagnosticLevel::Error:
      return "error";
    case DiagnosticLevel::Warn:
      return "warn";
    case DiagnosticLevel::Info:
      return "info";
  }
  return "info";
}

json request_to_json(const AdapterRequest& request) {
  return {{"action", std::string(to_string(request.action))},
          {"scenario_path", request.scenario_path},
          {"project_root", request.project_root}};
}

AdapterRequest request_from_json(const json& doc) {
  if (!doc.is_object()) throw AdapterError("request must be a JSON object");
  AdapterRequest r;
  auto action = doc.value("action", std::string());
  if (action == "compile")
    r.action = AdapterAction::Compile;
  else if (action == "run")
    r.action = AdapterAction::Run;
  else
    throw AdapterError("unknown action '" + action + "'");
  r.scenario_path = doc.value("scenario_path", std::string());
  r.project_root = doc.value("project_root", std::string());
  if (r.scenario_path.empty()) throw AdapterError("request needs a scenario_path");
  return r;
}

json response_to_json(const AdapterResponse& response) {
  json diags = json::array();
  for (const auto& d : response.diagnostics) {
    json entry = {{"level", std::string(to_string(d.level))}, {"message", d.message}};
    if (d.line) entry["line"] = *d.line;
    diags.push_back(std::move(entry));
  }
  json out = {{"status", std::string(to_string(response.status))}, {"diagnostics", diags}};
  if (response.lcov) out["lcov"] = *response.lcov;
  return out;
}

AdapterResponse response_from_json(const json& doc) {
  if (!doc.is_object()) throw AdapterError("adapter response must be a JSON object");
  AdapterResponse r;
  auto status = doc.find("status");
  if (status == doc.end() || !status->is_string()) throw AdapterError("adapter response lacks a status");
  const auto s = status->get<std::string>();
  if (s == "ok")
    r.status = AdapterStatus::Ok;
  else if (s == "compile_error")
    r.status = AdapterStatus::CompileError;
  else if (s == "runtime_error")
    r.status = AdapterStatus::RuntimeError;
  else
    throw AdapterError("unknown adapter status '" + s + "'");

  if (auto diags = doc.find("diagnostics"); diags != doc.end()) {
    if (!diags->is_array()) throw AdapterError("diagnostics must be an array");
    for (const auto& d : *diags) {
      if (!d.is_object() || !d.contains("message") || !d["message"].is_string())
        throw AdapterError("diagnostic entries need a message");
      Diagnostic diag;
      auto level = d.value("level", std::string("info"));
      if (level == "error")
        diag.level = DiagnosticLevel::Error;
      else if (level == "warn")
        diag.level = DiagnosticLevel::Warn;
      else if (level == "info")
        diag.level = DiagnosticLevel::Info;
      else
        throw AdapterError("unknown diagnostic level '" + level + "'");
      diag.message = d["message"].get<std::string>();
      if (d.contains("line") && d["line"].is_number_integer()) diag.line = d["line"].get<int>();
      r.diagnostics.push_back(std::move(diag));
    }
  }
  if (auto lcov = doc.find("lcov"); lcov != doc.end() && !lcov->is_null()) {
    if (!lcov->is_string()) throw AdapterError("lcov must be a string");
    r.lcov = lcov->get<std::string>();
  }
  return r;
}

namespace {

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (::pipe(fds) != 0) throw AdapterError(std::string("pipe failed: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

}  // namespace

AdapterResponse ProcessAdapter::execute(const AdapterRequest& request) {
  // A child that exits early must not kill us with SIGPIPE.
  static const bool sigpipe_ignored = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  Pipe in;
  Pipe out;
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.fds[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out.fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, in.fds[1]);
  posix_spawn_file_actions_addclose(&actions, out.fds[0]);

  std::string sh = "/bin/sh";
  std::string dash_c = "-c";
  std::string cmd = command_;
  char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};
  pid_t pid = 0;
  int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw AdapterError("cannot spawn adapter '" + command_ + "': " + std::strerror(rc));
  in.close_read();
  out.close_write();

  const std::string payload = request_to_json(request).dump() + "\n";
  std::size_t written = 0;
  while (written < payload.size()) {
    auto n = ::write(in.fds[1], payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;  // the exit status tells the rest
    }
    written += static_cast<std::size_t>(n);
  }
  in.close_write();

  std::string output;
  char buf[4096];
  while (true) {
    auto n = ::read(out.fds[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  out.close_read();

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw AdapterError(std::string("waitpid failed: ") + std::strerror(errno));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw AdapterError("adapter '" + command_ + "' exited with status " +
                       std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));

  json doc;
  try {
    doc = json::parse(output);
  } catch (const json::parse_error& e) {
    throw AdapterError(std::string("adapter returned invalid JSON: ") + e.what());
  }
  return response_from_json(doc);
}

}  // namespace tplreach
