#include <gtest/gtest.h>

#include "surgery/model_file.hpp"
#include "test_support.hpp"

namespace surgery {
namespace {

using testing::data_path;

TEST(ModelFile, ParsesSmokingFixture) {
  ModelFile f = load_model_file(data_path("smoking_fitted.json"));
  ASSERT_EQ(f.variables.size(), 4u);
  EXPECT_TRUE(f.variables[2].latent);
  EXPECT_EQ(f.edges.size(), 4u);
  ASSERT_TRUE(f.cpts.has_value());
  EXPECT_EQ(f.cpts->at("C").size(), 4u);
  EXPECT_FALSE(f.joint.has_value());
}

TEST(ModelFile, JointFixtureHasObservedLength) {
  ModelFile f = load_model_file(data_path("smoking_joint.json"));
  ASSERT_TRUE(f.joint.has_value());
  EXPECT_EQ(observed_space(f).names(), (std::vector<std::string>{"S", "T", "C"}));
  EXPECT_EQ(build_joint(f).to_vector(), *f.joint);
}

TEST(ModelFile, BuildJointFromCptsForgetsLatents) {
  JointState w = build_joint(load_model_file(data_path("smoking_fitted.json")));
  EXPECT_LE(testing::max_diff(w.to_vector(), testing::smoking_omega().to_vector()), 1e-15);
}

TEST(ModelFile, RejectsMalformedInput) {
  EXPECT_THROW(parse_model_file("{"), ParseError);
  EXPECT_THROW(parse_model_file("[]"), ParseError);
  EXPECT_THROW(parse_model_file(R"({"variables": [{"name": "A"}]})"), ParseError);
  EXPECT_THROW(parse_model_file(R"({"variables": [{"name": "A", "cardinality": 0}]})"), ParseError);
  EXPECT_THROW(parse_model_file(R"({"variables": [{"name": "A", "cardinality": 2}], "edges": [["A"]]})"), ParseError);
  EXPECT_THROW(parse_model_file(R"({"variables": [{"name": "A", "cardinality": 2}], "joint": [0.5]})"), ParseError);
  EXPECT_THROW(parse_model_file(R"({"variables": [{"name": "A", "cardinality": 2}], "joint": [1.5, -0.5]})"), ParseError);
  EXPECT_THROW(parse_model_file(R"({"variables": [{"name": "A", "cardinality": 2}], "cpts": {"A": [[0.5, 0.5], [1.0]]}})"),
               ParseError);
  EXPECT_THROW(load_model_file(data_path("does_not_exist.json")), ParseError);
}

TEST(ModelFile, StructuralErrorsAreLibraryErrors) {
  ModelFile f = load_model_file(data_path("cyclic.json"));
  try {
    build_dag(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CycleDetected);
  }
}

TEST(ModelFile, JsonRoundTrip) {
  ModelFile f = load_model_file(data_path("five_node.json"));
  ModelFile g = parse_model_file(to_json(f).dump());
  EXPECT_EQ(g.variables, f.variables);
  EXPECT_EQ(g.edges, f.edges);
  EXPECT_EQ(g.cpts, f.cpts);
}

TEST(ModelFile, CptColumnsRoundTrip) {
  ModelFile f = load_model_file(data_path("five_node.json"));
  EXPECT_EQ(cpt_columns(build_model(f)), *f.cpts);
}

TEST(Render, FixedPrecision) {
  nlohmann::ordered_json doc{{"x", 0.1234567}, {"v", {1.0, 0.5}}, {"n", 3}, {"s", "a"}, {"z", -0.0}};
  EXPECT_EQ(render(doc, 3), "{\n  \"x\": 0.123,\n  \"v\": [1.000, 0.500],\n  \"n\": 3,\n  \"s\": \"a\",\n  \"z\": 0.000\n}\n");
}

TEST(Render, TinyValuesFallBackToExponent) {
  nlohmann::ordered_json doc{{"tol", 1e-9}};
  EXPECT_EQ(render(doc, 6), "{\"tol\": 1.000000e-09}\n");
}

TEST(Render, StateDocumentCarriesDiagnostics) {
  auto doc = state_json(testing::smoking_omega(), 1e-9);
  EXPECT_EQ(doc["kind"], "state");
  EXPECT_EQ(doc["variables"].size(), 3u);
  EXPECT_DOUBLE_EQ(doc["diagnostics"]["min_entry"].get<double>(), 0.01);
  EXPECT_NEAR(doc["diagnostics"]["sum"].get<double>(), 1.0, 1e-15);
}

}  // namespace
}  // namespace surgery
