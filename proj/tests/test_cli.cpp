// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result twm_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = twm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, ParsePrintsCanonicalForm) {
  const Result r = twm_run({"parse", "{ud:(w0);up:(r0 ,w1)}"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{ ud:(w0); up:(r0,w1) }\n");
  EXPECT_NE(r.err.find("final write never observed"), std::string::npos);
}

TEST(Cli, TransformMarchU) {
  const Result r = twm_run({"transform", "marchu", "--width", "8"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "{ up:(rD@0,w~D@0,r~D@0,wD@0); up:(rD@0,w~D@0); "
            "dn:(r~D@0,wD@0,rD@0,w~D@0); dn:(r~D@0,wD@0); ud:(rD@0); "
            "ud:(wD@1,w~D@1,r~D@1,wD@1,rD@1); ud:(wD@2,w~D@2,r~D@2,wD@2,rD@2); "
            "ud:(wD@3,w~D@3,r~D@3,wD@3,rD@3); ud:(wD@0) }\n");
}

TEST(Cli, TransformTraceJson) {
  const Result r = twm_run({"transform", "marchu", "--width", "8", "--trace"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schemaVersion"], 1);
  EXPECT_EQ(j["output"]["ops"], 29);
  EXPECT_EQ(j["tcpExact"], 13);
  EXPECT_EQ(j["backgrounds"][3], "00001111");
  EXPECT_EQ(j["tsmarchFinalState"], "SAME_AS_INITIAL");
}

TEST(Cli, TransformSchemeOne) {
  const Result r = twm_run({"transform", "marchc-", "--width", "4", "--scheme", "scheme1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ud:(wD@2); up:(rD@2,w~D@2)"), std::string::npos);
  EXPECT_NE(r.out.find("ud:(rD@2); ud:(wD@0) }"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(twm_run({"transform", "{ up:(r0,q) }", "--width", "4"}).code, 2);
  const Result empty = twm_run({"transform", temp_file("twm_empty.march", "\n"), "--width", "4"});
  EXPECT_EQ(empty.code, 3);
  EXPECT_NE(empty.err.find("Abort"), std::string::npos);
  EXPECT_EQ(twm_run({"transform", "{ }", "--width", "4"}).code, 3);
  EXPECT_EQ(twm_run({"transform", "/nonexistent/file.march", "--width", "4"}).code, 2);
  EXPECT_EQ(twm_run({"simulate", "marchc-", "--width", "8", "--signature"}).code, 4);
  EXPECT_EQ(twm_run({"simulate", "{ ud:(rD@3) }", "--width", "4"}).code, 4);
  EXPECT_EQ(twm_run({"simulate", "marchc-", "--width", "4", "--words", "2",
                     "--fault", "saf0:5.0"}).code, 4);
  EXPECT_EQ(twm_run({"frobnicate"}).code, 1);
  EXPECT_EQ(twm_run({"--help"}).code, 0);
}

TEST(Cli, ComplexityTable) {
  const Result r = twm_run({"complexity", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schemaVersion"], 1);
  ASSERT_EQ(j["rows"].size(), 24u);
  const auto& first = j["rows"][0];
  EXPECT_EQ(first["test"], "marchc-");
  EXPECT_EQ(first["width"], 16);
  EXPECT_EQ(first["scheme"], "SCHEME1");
  EXPECT_EQ(first["total"], 75);
  EXPECT_TRUE(j["rows"][1]["tcp"].is_null());
  EXPECT_EQ(j["rows"][2]["total"], 43);

  const Result text = twm_run({"complexity", "marchc-", "--width", "32"});
  EXPECT_NE(text.out.find("90N"), std::string::npos);
  EXPECT_NE(text.out.find("260N"), std::string::npos);
  EXPECT_NE(text.out.find("50N"), std::string::npos);
}

TEST(Cli, SimulateVerdicts) {
  auto j = nlohmann::json::parse(
      twm_run({"simulate", "marchc-", "--scheme", "twmta", "--width", "8",
               "--seed", "7", "--format", "json"}).out);
  EXPECT_EQ(j["transparent"], true);
  EXPECT_EQ(j["detected"], false);
  j = nlohmann::json::parse(
      twm_run({"simulate", "marchc-", "--scheme", "twmta", "--width", "8",
               "--seed", "7", "--fault", "saf0:3.2", "--format", "json"}).out);
  EXPECT_EQ(j["detected"], true);
  EXPECT_TRUE(j["firstMismatch"].is_number());
}

TEST(Cli, SimulateWithContentFile) {
  const std::string path = temp_file("twm_contents.hex", "0\n5\na\nf\n");
  const Result r = twm_run({"simulate", "{ ud:(rD,w~D,r~D,wD,rD) }", "--width", "4",
                            "--words", "4", "--contents", path, "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["initialSnapshot"][1], "0101");
  EXPECT_EQ(j["readCount"], 12);
  EXPECT_EQ(twm_run({"simulate", "marchc-", "--width", "4", "--words", "5",
                     "--contents", path}).code, 4);
}

TEST(Cli, SignatureMode) {
  const Result r = twm_run({"simulate", "{ ud:(rD); ud:(rD@1) }", "--width", "4",
                            "--signature", "--fault", "saf1:0.0", "--contents", "zero"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, CoverageAndEquivalence) {
  const Result cov = twm_run({"coverage", "marchc-", "--scheme", "twmta", "--width", "4",
                              "--words", "4", "--count", "4", "--format", "json"});
  ASSERT_EQ(cov.code, 0);
  const auto j = nlohmann::json::parse(cov.out);
  EXPECT_EQ(j["percent"], 100.0);
  EXPECT_EQ(j["perKind"].size(), 7u);

  const Result none = twm_run({"coverage", "marchc-", "--width", "4", "--faults", ""});
  EXPECT_EQ(none.code, 0);

  const Result eq = twm_run({"equivalence", "marchu", "--width", "4", "--words", "4",
                             "--count", "4"});
  EXPECT_EQ(eq.code, 0);
  EXPECT_EQ(eq.out.rfind("EQUAL", 0), 0u);
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::string> args{"coverage", "marchu", "--scheme", "twmta",
                                      "--width", "4", "--words", "3", "--count", "3",
                                      "--seed", "5", "--format", "json", "--threads", "3"};
  EXPECT_EQ(twm_run(args).out, twm_run(args).out);
}
