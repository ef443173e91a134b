#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tplreach/adapter.hpp"
#include "tplreach/coverage.hpp"
#include "tplreach/fixture_adapter.hpp"

using namespace tplreach;
using nlohmann::json;

namespace {

const char* kFigScenario = "graphhopper/responses/fc7d009e1dee_b678706daf6f/1.txt";
const char* kGraphFile = "com/graphhopper/routing/ch/CHPreparationGraph.java";

std::string adapter_command() {
  return std::string(FIXTURE_ADAPTER_BIN) + " --model " + testutil::fixture("graphhopper/model.fix");
}

bool has_error(const AdapterResponse& r, const std::string& needle) {
  for (const auto& d : r.diagnostics)
    if (d.level == DiagnosticLevel::Error && d.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(AdapterProtocol, RequestRoundTrip) {
  AdapterRequest req{AdapterAction::Run, "/tmp/x.scenario", "/src"};
  auto back = request_from_json(request_to_json(req));
  EXPECT_EQ(back.action, AdapterAction::Run);
  EXPECT_EQ(back.scenario_path, "/tmp/x.scenario");
  EXPECT_EQ(back.project_root, "/src");
  EXPECT_THROW(request_from_json(json{{"action", "link"}, {"scenario_path", "x"}}), AdapterError);
  EXPECT_THROW(request_from_json(json{{"action", "run"}}), AdapterError);
}

TEST(AdapterProtocol, ResponseRoundTrip) {
  AdapterResponse r{AdapterStatus::CompileError,
                    {{DiagnosticLevel::Error, "boom", 3}, {DiagnosticLevel::Warn, "meh", std::nullopt}},
                    std::string("SF:a\nDA:1,1\nend_of_record\n")};
  EXPECT_EQ(response_from_json(response_to_json(r)), r);
}

TEST(AdapterProtocol, MalformedResponsesAreAdapterErrors) {
  EXPECT_THROW(response_from_json(json::array()), AdapterError);
  EXPECT_THROW(response_from_json(json{{"diagnostics", json::array()}}), AdapterError);
  EXPECT_THROW(response_from_json(json{{"status", "exploded"}}), AdapterError);
  EXPECT_THROW(response_from_json(json{{"status", "ok"}, {"diagnostics", {{{"level", "error"}}}}}), AdapterError);
  EXPECT_THROW(response_from_json(json{{"status", "ok"}, {"lcov", 5}}), AdapterError);
}

TEST(FixtureAdapter, GraphhopperScenarioCoversTheSite) {
  FixtureAdapter adapter(testutil::graphhopper());
  auto text = testutil::read_file(testutil::fixture(kFigScenario));
  auto compiled = adapter.compile_text(text);
  EXPECT_EQ(compiled.status, AdapterStatus::Ok);
  auto ran = adapter.run_text(text);
  ASSERT_EQ(ran.status, AdapterStatus::Ok);
  ASSERT_TRUE(ran.lcov);
  auto cov = parse_lcov(*ran.lcov, Provenance::ScenarioRun);
  EXPECT_TRUE(cov.covered(kGraphFile, 69));
  EXPECT_TRUE(cov.covered(kGraphFile, 18));   // edgeBased
  EXPECT_FALSE(cov.covered(kGraphFile, 48));  // the functional interface never runs
}

TEST(FixtureAdapter, UnknownClassOrMethodFailsCompile) {
  FixtureAdapter adapter(testutil::graphhopper());
  auto r = adapter.compile_text("CHPreparationGraph g = Graphs.make();\n");
  EXPECT_EQ(r.status, AdapterStatus::CompileError);
  EXPECT_TRUE(has_error(r, "cannot find symbol: class Graphs"));
  EXPECT_EQ(r.diagnostics[0].line, std::optional<int>(1));

  auto m = adapter.compile_text("CHPreparationGraph.explode(1);\n");
  EXPECT_TRUE(has_error(m, "cannot find symbol: method explode in class CHPreparationGraph"));

  // Imported or builtin names are accepted without a model class.
  EXPECT_EQ(adapter.compile_text("import org.x.Helper;\nHelper.go();\nMath.max(1, 2);\n").status, AdapterStatus::Ok);
}

TEST(FixtureAdapter, ThrowIsARuntimeError) {
  FixtureAdapter adapter(testutil::graphhopper());
  auto r = adapter.run_text("int a = 1;\n    throw new IllegalStateException(\"nope\");\n");
  EXPECT_EQ(r.status, AdapterStatus::RuntimeError);
  EXPECT_TRUE(has_error(r, "Exception in scenario: IllegalStateException: nope"));
  EXPECT_FALSE(r.lcov);
}

TEST(FixtureAdapter, ConstructorOnlyDoesNotReachPrepare) {
  FixtureAdapter adapter(testutil::graphhopper());
  auto r = adapter.run_text("CHPreparationGraph g = CHPreparationGraph.edgeBased(1, 1, null);\n");
  auto cov = parse_lcov(*r.lcov);
  EXPECT_TRUE(cov.covered(kGraphFile, 26));
  EXPECT_FALSE(cov.covered(kGraphFile, 69));
}

TEST(FixtureAdapter, MissingScenarioFileIsCompileError) {
  FixtureAdapter adapter(testutil::graphhopper());
  auto r = adapter.execute({AdapterAction::Run, "/nonexistent/x.scenario", "."});
  EXPECT_EQ(r.status, AdapterStatus::CompileError);
}

TEST(ProcessAdapter, SameAnswerAsInProcessAdapter) {
  auto dir = testutil::temp_dir("adapter");
  auto scenario = (dir / "s.scenario").string();
  testutil::write_file(scenario, testutil::read_file(testutil::fixture(kFigScenario)));
  FixtureAdapter local(testutil::graphhopper());
  ProcessAdapter remote(adapter_command());
  for (auto action : {AdapterAction::Compile, AdapterAction::Run}) {
    AdapterRequest req{action, scenario, dir.string()};
    EXPECT_EQ(remote.execute(req), local.execute(req));
  }
  std::filesystem::remove_all(dir);
}

TEST(ProcessAdapter, NonZeroExitIsAdapterError) {
  ProcessAdapter failing("exit 4");
  EXPECT_THROW(failing.execute({AdapterAction::Compile, "x", "."}), AdapterError);
  ProcessAdapter bad_model(std::string(FIXTURE_ADAPTER_BIN) + " --model /nonexistent.json");
  EXPECT_THROW(bad_model.execute({AdapterAction::Compile, "x", "."}), AdapterError);
}

TEST(ProcessAdapter, GarbageOutputIsAdapterError) {
  ProcessAdapter garbage("cat >/dev/null; echo not-json");
  EXPECT_THROW(garbage.execute({AdapterAction::Compile, "x", "."}), AdapterError);
}
