#pragma once

#include <map>
#include <string>
#include <vector>

#include "tplreach/adapter.hpp"
#include "tplreach/callgraph.hpp"
#include "tplreach/model.hpp"

namespace tplreach {

/// Execution adapter that "compiles" and "runs" scenario text against a code
/// model instead of a real toolchain. Used by the test suites and demos.
///
/// Compile: every `Upper.name(` and `new Upper(` must name a model class (by
/// simple name), a class imported by the scenario, or a java.lang-style
/// builtin; model classes must also define the called method.
/// Run: a top-level `throw new X("msg")` aborts with a runtime error.
/// Otherwise each project method invoked by the scenario executes, along with
/// everything it reaches through the CHA call graph, and every line of every
/// executed method is reported covered.
class FixtureAdapter : public ExecutionAdapter {
 public:
  explicit FixtureAdapter(ProjectModel model);
  AdapterResponse execute(const AdapterRequest& request) override;

  AdapterResponse compile_text(const std::string& scenario) const;
  AdapterResponse run_text(const std::string& scenario) const;

 private:
  std::vector<std::string> classes_named(const std::string& simple) const;
  std::vector<std::string> methods_named(const std::string& fq_class, const std::string& name) const;

  ProjectModel model_;
  CallGraph graph_;
  std::map<std::string, std::vector<std::string>> by_simple_name_;
};

}  // namespace tplreach
