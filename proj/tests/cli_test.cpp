#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "prodcrit/cli/cli.hpp"
#include "prodcrit/cli/state_io.hpp"
#include "prodcrit/product.hpp"
#include "test_util.hpp"

namespace prodcrit::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(PRODCRIT_FIXTURES) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("prodcrit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, GenWritesReadableState) {
  const Result r = invoke({"gen", "--state", "example1", "--p", "0.3", "-o", path("s.json")});
  ASSERT_EQ(r.code, kExitProduct) << r.err;
  const DensityMatrix rho = as_density(read_state_file(path("s.json")));
  EXPECT_LT(testing::max_abs_diff(rho.matrix(), gen_example1(0.3).matrix()), 1e-15);
}

TEST_F(CliTest, StateFilesRoundTripBitwise) {
  for (const std::string state : {"example1", "example2", "w", "random", "random-pure"}) {
    std::vector<std::string> args{"gen", "--state", state, "-o", path("a.json")};
    if (state == "example1") args.insert(args.end(), {"--p", "0.7"});
    if (state.rfind("random", 0) == 0) args.insert(args.end(), {"--seed", "11", "--dims", "2,3"});
    ASSERT_EQ(invoke(args).code, 0) << state;
    const StateValue value = read_state_file(path("a.json"));
    write_state_file(path("b.json"), value);
    EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json"))) << state;
    const StateValue again = read_state_file(path("b.json"));
    EXPECT_EQ(as_density(value).matrix(), as_density(again).matrix()) << state;
  }
}

TEST_F(CliTest, GenNamedStates) {
  ASSERT_EQ(invoke({"gen", "--state", "ghz", "--n", "2", "-o", path("g.json")}).code, 0);
  EXPECT_LT(testing::max_abs_diff(as_density(read_state_file(path("g.json"))).matrix(),
                                  density_from_pure(gen_bell()).matrix()),
            1e-15);
  ASSERT_EQ(invoke({"gen", "--state", "example1", "--p", "0.5", "-o", path("e.json")}).code, 0);
  const ComplexMatrix m = as_density(read_state_file(path("e.json"))).matrix();
  EXPECT_EQ(m.diagonal().real(), Eigen::Vector4d(0.375, 0.125, 0.125, 0.375));
  EXPECT_EQ(invoke({"gen", "--state", "example1"}).code, kExitUsage);
}

TEST_F(CliTest, GenToStdoutMatchesFile) {
  const Result r = invoke({"gen", "--state", "random", "--dims", "3,2", "--seed", "4"});
  ASSERT_EQ(r.code, 0);
  ASSERT_EQ(invoke({"gen", "--state", "random", "--dims", "3,2", "--seed", "4", "-o", path("r.json")}).code, 0);
  EXPECT_EQ(r.out, read_text_file(path("r.json")));
}

TEST_F(CliTest, TestVerdictsAndExitCodes) {
  const Result yes = invoke({"test", fixture("example2.json"), "-P", "3|1,2"});
  EXPECT_EQ(yes.code, kExitProduct);
  EXPECT_NE(yes.out.find("verdict: product"), std::string::npos) << yes.out;
  const Result no = invoke({"test", fixture("example2.json"), "-P", "1|2,3"});
  EXPECT_EQ(no.code, kExitNotProduct);
  EXPECT_NE(no.out.find("verdict: not product"), std::string::npos) << no.out;
  EXPECT_EQ(invoke({"test", fixture("example1_p0.5.json"), "-P", "1|2"}).code, kExitNotProduct);
  EXPECT_EQ(invoke({"test", fixture("product_3x2.json"), "-P", "1|2"}).code, kExitProduct);
}

TEST_F(CliTest, JsonReportContents) {
  const Result r = invoke({"test", fixture("example2.json"), "-P", "3|1,2", "--json"});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["command"], "test");
  EXPECT_EQ(doc["partition"], "1,2|3");
  EXPECT_EQ(doc["verdict"], true);
  EXPECT_EQ(doc["rank"], 1);
  EXPECT_EQ(doc["singular_values"].size(), 4u);
  EXPECT_EQ(doc["input_digest"].get<std::string>().rfind("sha256:", 0), 0u);
}

TEST_F(CliTest, OutputFileHoldsSameReport) {
  const Result r = invoke({"analyze", fixture("example2.json"), "--json", "-o", path("rep.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, read_text_file(path("rep.json")));
}

TEST_F(CliTest, AnalyzeExamples) {
  EXPECT_EQ(invoke({"analyze", fixture("example2.json")}).out, "1,2|3\n");
  EXPECT_EQ(invoke({"analyze", fixture("w3.json")}).out, "1,2,3\n");
  EXPECT_EQ(invoke({"analyze", fixture("product_3x2.json")}).out, "1|2\n");
  EXPECT_EQ(invoke({"analyze", fixture("bell.json")}).out, "1,2\n");
}

TEST_F(CliTest, AnalyzeJsonFactorsReconstruct) {
  const Result r = invoke({"analyze", fixture("example2.json"), "--json"});
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["finest_partition"], "1,2|3");
  ASSERT_EQ(doc["factors"].size(), 2u);
  EXPECT_EQ(doc["factors"][0]["subsystems"], json::parse("[1,2]"));
  EXPECT_LT(doc["reconstruction_error"].get<double>(), 1e-8);
  const DensityMatrix bell = as_density(state_from_json(doc["factors"][0]));
  EXPECT_LT(testing::max_abs_diff(bell.matrix(), density_from_pure(gen_bell()).matrix()), 1e-10);
}

TEST_F(CliTest, FactorizeReportsFactors) {
  const Result r = invoke({"factorize", fixture("example2.json"), "-P", "1,2|3", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_LT(doc["reconstruction_error"].get<double>(), 1e-8);
  EXPECT_EQ(invoke({"factorize", fixture("w3.json"), "-P", "1|2,3"}).code, kExitNotProduct);
  EXPECT_EQ(invoke({"factorize", fixture("w3.json"), "-P", "1|2|3"}).code, kExitUsage);
}

TEST_F(CliTest, RealignAndSvals) {
  const Result m = invoke({"realign", fixture("example2.json"), "-P", "1|2,3", "--json"});
  ASSERT_EQ(m.code, 0) << m.err;
  const json doc = json::parse(m.out);
  ASSERT_TRUE(doc.contains("matrix"));
  EXPECT_EQ(doc["matrix"].size(), 4u);
  EXPECT_EQ(doc["matrix"][0].size(), 16u);
  const Result s = invoke({"svals", fixture("example1_p0.5.json"), "-P", "1|2", "--json"});
  ASSERT_EQ(s.code, 0) << s.err;
  const json sv = json::parse(s.out)["singular_values"];
  EXPECT_NEAR(sv[0].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(sv[1].get<double>(), 0.25, 1e-12);
}

TEST_F(CliTest, ByteStableAcrossRuns) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"analyze", fixture("w3.json"), "--json"},
        std::vector<std::string>{"test", fixture("example1_p0.3.json"), "-P", "1|2", "--json"},
        std::vector<std::string>{"gen", "--state", "random-product", "--dims", "2|2,3", "--seed", "9"}}) {
    const Result a = invoke(args), b = invoke(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"gen", "--state", "nosuch"}).code, kExitUsage);
  EXPECT_EQ(invoke({"gen", "--state", "example1", "--p", "-0.1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"test", fixture("example2.json")}).code, kExitUsage);
  EXPECT_EQ(invoke({"test", fixture("example2.json"), "-P", "1|1,2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"test", fixture("example2.json"), "-P", "1|2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"test", fixture("example2.json"), "-P", "1|2,3", "--tol", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"test", path("missing.json"), "-P", "1|2"}).code, kExitUsage);
  const Result help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
}

TEST_F(CliTest, RejectsMalformedStateFiles) {
  write_text_file(path("bad.json"), "{\"dims\": [2], \"kind\": \"density\", \"data\": [[[1,0],[0,0]],[[0,0],[1,0]]]}");
  EXPECT_EQ(invoke({"analyze", path("bad.json")}).code, kExitUsage);
  write_text_file(path("junk.json"), "not json");
  EXPECT_EQ(invoke({"analyze", path("junk.json")}).code, kExitUsage);
  write_text_file(path("shape.json"), "{\"dims\": [2, 2], \"kind\": \"pure\", \"data\": [[1,0]]}");
  const Result r = invoke({"analyze", path("shape.json")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace prodcrit::cli
