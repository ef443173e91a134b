#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"
#include "tplreach/fixture_dsl.hpp"
#include "tplreach/hierarchy.hpp"
#include "tplreach/model_json.hpp"

using namespace tplreach;
using nlohmann::json;

namespace {

json minimal_json() {
  return json::parse(R"json({
    "project_id": "mini",
    "dependencies": [],
    "classes": [{
      "fq_name": "a.A", "supertypes": [], "is_project_class": true, "file": "a/A.src",
      "imports": [], "fields": [],
      "methods": [{"id": "a.A.run()", "visibility": "public", "is_static": false,
                   "is_constructor": false, "is_factory": false, "is_setter": false,
                   "line_start": 1, "line_end": 3, "calls": []}]
    }],
    "sources": {"a/A.src": "class A {\n  void run() {}\n}\n"}
  })json");
}

template <typename E>
E expect_throw(const json& doc) {
  try {
    model_from_json(doc);
  } catch (const E& e) {
    return e;
  }
  ADD_FAILURE() << "expected exception for " << doc.dump();
  throw std::runtime_error("unreachable");
}

}  // namespace

TEST(ModelJson, MinimalModelHasNoTplSites) {
  auto model = parse_model_json(minimal_json().dump());
  EXPECT_EQ(model.classes().size(), 1u);
  EXPECT_TRUE(tpl_call_sites(model).empty());
  ASSERT_TRUE(model.source_lines("a/A.src"));
  EXPECT_EQ((*model.source_lines("a/A.src"))[1], "  void run() {}");
}

TEST(ModelJson, MissingFieldReportsPointer) {
  auto doc = minimal_json();
  doc["classes"][0]["methods"][0].erase("line_end");
  auto e = expect_throw<SchemaError>(doc);
  EXPECT_EQ(e.pointer(), "/classes/0/methods/0/line_end");
}

TEST(ModelJson, WrongKindReportsPointer) {
  auto doc = minimal_json();
  doc["classes"][0]["is_project_class"] = "yes";
  EXPECT_EQ(expect_throw<SchemaError>(doc).pointer(), "/classes/0/is_project_class");
}

TEST(ModelJson, UnknownFieldRejected) {
  auto doc = minimal_json();
  doc["classes"][0]["colour"] = "blue";
  EXPECT_EQ(expect_throw<SchemaError>(doc).pointer(), "/classes/0/colour");
}

TEST(ModelJson, MalformedJsonIsSchemaError) {
  EXPECT_THROW(parse_model_json("{\"project_id\": "), SchemaError);
}

TEST(ModelJson, DanglingSupertypeIsReferenceError) {
  auto doc = minimal_json();
  doc["classes"][0]["supertypes"] = {"a.Missing"};
  expect_throw<ReferenceError>(doc);
}

TEST(ModelJson, SupertypeCycleNamesTheCycle) {
  auto doc = minimal_json();
  auto b = doc["classes"][0];
  b["fq_name"] = "a.B";
  b["file"] = "a/B.src";
  b["methods"][0]["id"] = "a.B.run()";
  b["supertypes"] = {"a.A"};
  doc["classes"][0]["supertypes"] = {"a.B"};
  doc["classes"].push_back(b);
  auto e = expect_throw<CycleError>(doc);
  EXPECT_EQ(e.cycle(), (std::vector<std::string>{"a.A", "a.B"}));
}

TEST(ModelJson, InvariantViolationsAreRejected) {
  {
    auto doc = minimal_json();
    doc["classes"][0]["methods"][0]["line_start"] = 5;
    expect_throw<SchemaError>(doc);  // start > end
  }
  {
    auto doc = minimal_json();
    doc["classes"][0]["methods"].push_back(doc["classes"][0]["methods"][0]);
    expect_throw<SchemaError>(doc);  // duplicate id
  }
  {
    auto doc = minimal_json();
    doc["classes"][0]["file"] = nullptr;
    expect_throw<SchemaError>(doc);  // project class without file
  }
  {
    auto doc = minimal_json();
    doc["classes"][0]["methods"][0]["calls"] = json::parse(
        R"json([{"receiver_type": "a.A", "target": "run()", "line": 9, "dispatch": "virtual"}])json");
    expect_throw<SchemaError>(doc);  // call outside the method range
  }
  {
    auto doc = minimal_json();
    doc["dependencies"] = json::parse(R"json([{"coordinate": "x:y", "version": "1", "direct": true, "scope": "compile"},
                                          {"coordinate": "x:y", "version": "2", "direct": true, "scope": "compile"}])json");
    expect_throw<SchemaError>(doc);  // duplicate coordinate
  }
  {
    auto doc = minimal_json();
    doc["classes"][0]["methods"][0]["calls"] = json::parse(
        R"json([{"receiver_type": "a.Nowhere", "target": "x()", "line": 2, "dispatch": "virtual"}])json");
    // Unknown receivers are a call-graph warning, not a model error.
    EXPECT_NO_THROW(model_from_json(doc));
  }
}

TEST(ModelJson, DependencyMethodsHaveNoBodies) {
  auto doc = minimal_json();
  doc["classes"].push_back(json::parse(R"json({
    "fq_name": "lib.L", "supertypes": [], "is_project_class": false, "file": null, "imports": [], "fields": [],
    "methods": [{"id": "lib.L.f()", "visibility": "public", "is_static": false, "is_constructor": false,
                 "is_factory": false, "is_setter": false, "line_start": 1, "line_end": 5,
                 "calls": [{"receiver_type": "lib.L", "target": "f()", "line": 2, "dispatch": "virtual"}]}]
  })json"));
  expect_throw<SchemaError>(doc);
}

TEST(ModelJson, RoundTripOfRandomModels) {
  oracle::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    auto model = ProjectModel::create(oracle::random_hierarchy(rng));
    auto again = parse_model_json(dump_model_json(model));
    EXPECT_EQ(model, again);
    EXPECT_EQ(dump_model_json(model), dump_model_json(again));
  }
}

TEST(TplCallSites, GraphhopperExampleHasExactlyTheMergesortSite) {
  auto model = testutil::graphhopper();
  auto sites = tpl_call_sites(model);
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(sites[0].site.caller, "com.graphhopper.routing.ch.CHPreparationGraph$OrigGraph$Builder.build()");
  EXPECT_EQ(sites[0].tpl_targets,
            std::vector<std::string>{"com.carrotsearch.hppc.sorting.IndirectSort.mergesort(int,int,IndirectComparator)"});
  EXPECT_EQ(sites[0].site.line, 69);
}

TEST(TplCallSites, InheritedDependencyMethodThroughThis) {
  auto model = parse_fixture_dsl(R"(
project inherit
dep class lib.D { public m() }
class app.C : lib.D {
  public run() {
    call C.m@4
  }
}
)");
  auto sites = tpl_call_sites(model);
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(sites[0].tpl_targets, std::vector<std::string>{"lib.D.m()"});
}

TEST(TplCallSites, AgreesWithBruteForceDispatch) {
  oracle::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto data = oracle::random_hierarchy(rng);
    auto model = ProjectModel::create(data);
    std::set<std::pair<std::string, std::size_t>> expected;
    for (const auto& [from, to, line, index] : oracle::brute_force_edges(data)) {
      bool dep = false;
      for (const auto& c : data.classes)
        if (!c.is_project_class && to.starts_with(c.fq_name + ".")) dep = true;
      if (dep) expected.insert({from, index});
    }
    std::set<std::pair<std::string, std::size_t>> actual;
    for (const auto& s : tpl_call_sites(model)) actual.insert({s.site.caller, s.index});
    EXPECT_EQ(actual, expected) << "seed iteration " << i;
    EXPECT_EQ(tpl_call_sites(model), tpl_call_sites(model));
  }
}

TEST(TplCallSites, NoDependencyClassesMeansNoSites) {
  auto model = parse_fixture_dsl(R"(
project plain
class app.A {
  public a() { call A.b@3 }
  b()
}
)");
  EXPECT_TRUE(tpl_call_sites(model).empty());
}

TEST(TplCallSites, ProjectSubmodulesAreNeverDependencies) {
  // Same package prefix as a dependency coordinate, but declared as project code.
  auto model = parse_fixture_dsl(R"(
project sub
dependency org.lib:core 1.0
class org.lib.Helper { public help() }
class app.Main {
  public main() { call Helper.help@5 }
}
)");
  EXPECT_TRUE(tpl_call_sites(model).empty());
  EXPECT_TRUE(model.is_project_method("org.lib.Helper.help()"));
}
