#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "surgery/cli.hpp"
#include "surgery/model_file.hpp"
#include "test_support.hpp"

namespace surgery {
namespace {

using testing::data_path;

struct CliRun {
  int code;
  std::string out;
  std::string err;
  nlohmann::json doc() const { return nlohmann::json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "surgery");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<double> entries(const CliRun& r) { return r.doc()["entries"].get<std::vector<double>>(); }

TEST(CliValidate, FixtureIsOk) {
  CliRun r = run({"validate", data_path("smoking_fitted.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.doc()["ok"].get<bool>());
}

TEST(CliValidate, CycleIsReported) {
  CliRun r = run({"validate", data_path("cyclic.json")});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_EQ(r.doc()["error"], "CycleDetected");
}

TEST(CliValidate, BadColumnIsNamed) {
  CliRun r = run({"validate", data_path("bad_column.json")});
  EXPECT_EQ(r.code, kExitFailure);
  auto v = r.doc()["violations"];
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0]["kind"], "StochasticityViolation");
  EXPECT_EQ(v[0]["node"], "C");
  EXPECT_EQ(v[0]["column"], 1);
}

TEST(CliValidate, MalformedFileIsParseError) {
  EXPECT_EQ(run({"validate", data_path("malformed.json")}).code, kExitParse);
  EXPECT_EQ(run({"validate", data_path("missing.json")}).code, kExitParse);
}

TEST(CliInterpret, FittedSmokingGivesTable) {
  CliRun r = run({"interpret", data_path("smoking_fitted.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(entries(r), (std::vector<double>{0.5, 0.1, 0.01, 0.02, 0.1, 0.05, 0.02, 0.2}));
}

TEST(CliInterpret, UniformNode) {
  CliRun r = run({"interpret", data_path("uniform_node.json")});
  EXPECT_EQ(entries(r), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
}

TEST(CliInterpret, FiveNodeMatchesEnumeration) {
  CliRun r = run({"interpret", data_path("five_node.json"), "--precision", "17"});
  Model m = build_model(load_model_file(data_path("five_node.json")));
  EXPECT_LE(testing::max_diff(entries(r), testing::enumerate_joint(m)), 1e-15);
}

TEST(CliInterpret, JointOnlyFileNeedsCpts) {
  EXPECT_EQ(run({"interpret", data_path("smoking_joint.json")}).code, kExitParse);
}

TEST(CliIntervene, SmokingObservational) {
  CliRun r = run({"intervene", data_path("smoking_joint.json"), "--do", "S"});
  EXPECT_EQ(r.code, kExitOk);
  const std::vector<double> derived{0.367460, 0.108730, 0.005801, 0.018009, 0.156419, 0.046284, 0.072432, 0.224865};
  EXPECT_EQ(entries(r), derived);
  EXPECT_EQ(r.doc()["factorisation"]["grouping"]["B"], nlohmann::json::array({"T"}));
}

TEST(CliIntervene, BowGraphNamesWitness) {
  CliRun r = run({"intervene", data_path("bow.json"), "--do", "X"});
  EXPECT_EQ(r.code, kExitNotIdentifiable);
  EXPECT_EQ(r.doc()["diagnostics"]["witness"], "L");
}

TEST(CliIntervene, OracleAgreesWithObservational) {
  CliRun a = run({"intervene", data_path("smoking_fitted.json"), "--do", "S", "--precision", "17"});
  CliRun b = run({"intervene", data_path("smoking_fitted.json"), "--do", "S", "--mode", "oracle", "--precision", "17"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(b.code, kExitOk);
  EXPECT_LE(testing::max_diff(entries(a), entries(b)), 1e-9);
}

TEST(CliIntervene, ZeroEntryIsSupportFailure) {
  EXPECT_EQ(run({"intervene", data_path("zero_joint.json"), "--do", "S"}).code, kExitNoSupport);
}

TEST(CliComb, SmokingFactors) {
  CliRun r = run({"comb", data_path("smoking_joint.json"), "--grouping", "S", "T", "C", "--precision", "2"});
  EXPECT_EQ(r.code, kExitOk);
  auto doc = r.doc();
  EXPECT_EQ(doc["g"], nlohmann::json::parse("[[0.95, 0.05], [0.41, 0.59]]"));
  EXPECT_EQ(doc["f"], nlohmann::json::parse("[[0.53, 0.11, 0.25, 0.12], [0.21, 0.42, 0.03, 0.34]]"));
  EXPECT_TRUE(doc["diagnostics"]["is_comb"].get<bool>());
}

TEST(CliComb, RoundTripsThroughPlug) {
  CliRun r = run({"comb", data_path("smoking_joint.json"), "--grouping", "S", "T", "C", "--precision", "17"});
  auto doc = r.doc();
  auto f = doc["f"].get<std::vector<std::vector<double>>>();
  auto g = doc["g"].get<std::vector<std::vector<double>>>();
  auto w = testing::smoking_omega();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(f[j][i * 2 + k] * g[i][j], w[(i * 2 + j) * 2 + k], 1e-12);
}

TEST(CliDisintegrate, ProductJointHasConstantColumns) {
  CliRun r = run({"disintegrate", data_path("uniform_node.json"), "--split", "D|D"});
  EXPECT_NE(r.code, kExitOk);  // a variable on both sides is not a split
  CliRun s = run({"disintegrate", data_path("smoking_joint.json"), "--split", "S|C", "--precision", "2"});
  EXPECT_EQ(s.code, kExitOk);
  EXPECT_EQ(s.doc()["columns"], nlohmann::json::parse("[[0.81, 0.19], [0.32, 0.68]]"));
}

TEST(CliMarginal, KeepsRequestedOrder) {
  CliRun r = run({"marginal", data_path("smoking_joint.json"), "--keep", "C,S"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(entries(r), (std::vector<double>{0.51, 0.12, 0.12, 0.25}));
  EXPECT_EQ(r.doc()["variables"][0]["name"], "C");
}

TEST(CliRandcheck, EmptyRun) {
  CliRun r = run({"randcheck", "--count", "0"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.doc()["models"], 0);
}

TEST(CliRandcheck, Seed42AgreesWithOracle) {
  CliRun r = run({"randcheck", "--seed", "42", "--count", "200"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.doc()["deviations"], 0);
}

TEST(Cli, OutputIsDeterministic) {
  CliRun a = run({"randcheck", "--seed", "7", "--count", "30"});
  CliRun b = run({"randcheck", "--seed", "7", "--count", "30"});
  EXPECT_EQ(a.out, b.out);
  CliRun c = run({"intervene", data_path("smoking_joint.json"), "--do", "S"});
  CliRun d = run({"intervene", data_path("smoking_joint.json"), "--do", "S"});
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, OutputFlagWritesFile) {
  const std::string path = ::testing::TempDir() + "surgery_out.json";
  CliRun r = run({"interpret", data_path("uniform_node.json"), "--output", path});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(nlohmann::json::parse(in)["kind"], "state");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitParse);
  EXPECT_EQ(run({"intervene", data_path("bow.json")}).code, kExitParse);
  EXPECT_EQ(run({"intervene", data_path("bow.json"), "--do", "X", "--mode", "magic"}).code, kExitParse);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace surgery
