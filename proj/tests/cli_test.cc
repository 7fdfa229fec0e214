// Copyright 2026 The pqsuite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "pqsuite/png_codec.h"
#include "test_util.h"

namespace pqsuite::tools {
namespace {

using ::pqsuite::testing::TempDir;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const CliRun r = Cli({"synth", "--out", root().string(), "--images", "3",
                       "--seed", "4", "--width", "40", "--height", "40",
                       "--perturb", "erode:1", "--perturb", "drop:0.3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  std::filesystem::path root() const { return dir_.path(); }
  std::string gt() const { return (root() / "gt.json").string(); }
  std::string pred() const { return (root() / "pred.json").string(); }

 private:
  TempDir dir_;
};

TEST_F(CliTest, SynthLayout) {
  EXPECT_TRUE(std::filesystem::exists(root() / "gt" / "0000.png"));
  EXPECT_TRUE(std::filesystem::exists(root() / "pred" / "0002.png"));
}

TEST_F(CliTest, IdentityEvaluation) {
  const CliRun r = Cli({"evaluate", "--gt", gt(), "--pred", gt(), "--format",
                     "csv", "--quiet", "--no-timestamp"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("aggregate,,pq,1\n"), std::string::npos);
  EXPECT_NE(r.out.find("aggregate,,wpq,1\n"), std::string::npos);
}

TEST_F(CliTest, OracleVerification) {
  const CliRun r = Cli({"evaluate", "--gt", gt(), "--pred", pred(),
                     "--verify-oracle", "--out",
                     (root() / "report.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(root() / "report.json"));
}

TEST_F(CliTest, ConfigReplayIsByteIdentical) {
  const auto first = (root() / "a.json").string();
  const auto second = (root() / "b.json").string();
  ASSERT_EQ(Cli({"evaluate", "--gt", gt(), "--pred", pred(), "--wpq-a", "4",
                 "--denominator", "eq1", "--aggregate", "image",
                 "--no-timestamp", "--quiet", "--out", first})
                .code,
            kExitOk);
  ASSERT_EQ(Cli({"evaluate", "--gt", gt(), "--pred", pred(), "--config", first,
                 "--no-timestamp", "--quiet", "--out", second})
                .code,
            kExitOk);
  EXPECT_EQ(Slurp(first), Slurp(second));
}

TEST_F(CliTest, StrictMismatchFails) {
  std::filesystem::remove(root() / "pred" / "0001.png");
  const CliRun lenient = Cli({"evaluate", "--gt", gt(), "--pred", pred(),
                           "--quiet", "--no-timestamp"});
  EXPECT_EQ(lenient.code, kExitFailure);
  EXPECT_NE(lenient.err.find("0001"), std::string::npos);

  const CliRun strict_run = Cli({"evaluate", "--gt", gt(), "--pred", gt(),
                              "--strict", "--quiet"});
  EXPECT_EQ(strict_run.code, kExitOk);

  const auto partial = root() / "partial.json";
  {
    std::ofstream out(partial);
    out << R"({"images": [], "annotations": [], "categories": []})";
  }
  EXPECT_EQ(Cli({"evaluate", "--gt", gt(), "--pred", partial.string(),
                 "--strict", "--quiet"})
                .code,
            kExitFailure);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"evaluate", "--gt", gt()}).code, kExitUsage);
  EXPECT_EQ(Cli({"evaluate", "--gt", gt(), "--pred", pred(), "--wpq-a", "0.5"})
                .code,
            kExitUsage);
  EXPECT_EQ(Cli({"evaluate", "--gt", gt(), "--pred", pred(), "--metrics",
                 "miou"})
                .code,
            kExitUsage);
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
}

TEST_F(CliTest, VisualizeIsDeterministic) {
  const auto a = root() / "va";
  const auto b = root() / "vb";
  for (const auto& out : {a, b}) {
    const CliRun r = Cli({"visualize", "--gt", gt(), "--pred", pred(), "--image",
                       "0001", "--seed", "3", "--contours", "--out",
                       out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  ASSERT_TRUE(std::filesystem::exists(a / "0001.png"));
  EXPECT_EQ(Slurp(a / "0001.png"), Slurp(b / "0001.png"));
  const RgbImage image = DecodeRgbPng(ReadFileBytes(a / "0001.png"));
  EXPECT_EQ(image.width, 2 * 40 + 4);
}

TEST(CliConvertTest, MaskPairs) {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "masks" / "class");
  std::filesystem::create_directories(dir.path() / "masks" / "instance");
  const GrayImage cls{4, 2, 8, {0, 1, 1, 2, 0, 1, 1, 2}};
  const GrayImage inst{4, 2, 16, {0, 1, 1, 5, 0, 1, 1, 5}};
  WriteFileBytes(dir.path() / "masks" / "class" / "s1.png", EncodeGrayPng(cls));
  WriteFileBytes(dir.path() / "masks" / "instance" / "s1.png",
                 EncodeGrayPng(inst));
  const auto cats = dir.path() / "cats.json";
  {
    std::ofstream out(cats);
    out << R"({"categories": [{"id": 1, "name": "a"}, {"id": 2, "name": "b"}]})";
  }
  const auto out = dir.path() / "out";
  CliRun r = Cli({"convert", "--masks", (dir.path() / "masks").string(),
               "--categories", cats.string(), "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(out / "panoptic.json"));
  EXPECT_TRUE(std::filesystem::exists(out / "panoptic" / "s1.png"));
  r = Cli({"evaluate", "--gt", (out / "panoptic.json").string(), "--pred",
           (out / "panoptic.json").string(), "--quiet", "--format", "csv"});
  EXPECT_EQ(r.code, kExitOk) << r.err;

  const GrayImage unmapped{4, 2, 8, {0, 1, 1, 9, 0, 1, 1, 9}};
  WriteFileBytes(dir.path() / "masks" / "class" / "s2.png",
                 EncodeGrayPng(unmapped));
  WriteFileBytes(dir.path() / "masks" / "instance" / "s2.png",
                 EncodeGrayPng(inst));
  r = Cli({"convert", "--masks", (dir.path() / "masks").string(),
           "--categories", cats.string(), "--out", out.string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("s2"), std::string::npos);
}

TEST(CliSelftestTest, PassesAndCatchesFault) {
  CliRun r = Cli({"selftest", "--seeds", "5", "--scenes", "4"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("5 seed banks"), std::string::npos);
  r = Cli({"selftest", "--seeds", "2", "--scenes", "4",
           "--fault-inclusive-threshold"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.out.find("FAIL strict-threshold"), std::string::npos);
}

}  // namespace
}  // namespace pqsuite::tools
