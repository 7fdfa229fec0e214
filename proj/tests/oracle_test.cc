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

#include "pqsuite/oracle/oracle.h"

#include <vector>

#include "gtest/gtest.h"
#include "pqsuite/error.h"
#include "pqsuite/evaluate.h"
#include "pqsuite/matching.h"
#include "pqsuite/synth.h"
#include "test_util.h"

namespace pqsuite::oracle {
namespace {

using ::pqsuite::testing::Paint;
using ::pqsuite::testing::PaintAnnotation;

TEST(OracleContingencyTest, AgreesWithFastPath) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    spec.width = 40;
    spec.height = 30;
    spec.num_classes = 3;
    const auto gt = GenerateScene(spec);
    const auto pred = PerturbAll(gt, {{PerturbationKind::kShift, 2, seed},
                                      {PerturbationKind::kSpurious, 2, seed}});
    EXPECT_EQ(OracleContingency(gt.label_map, pred.label_map),
              Contingency(gt.label_map, pred.label_map));
  }
}

TEST(OracleContingencyTest, ShiftedPair) {
  const auto t = OracleContingency(Paint(8, 8, {{0, 0, 4, 4, 1, 1}}),
                                   Paint(8, 8, {{1, 0, 4, 4, 1, 2}}));
  EXPECT_EQ(t.Intersection(1, 2), 12);
  EXPECT_EQ(t.VoidOverlap(2), 4);
}

TEST(OracleBandTest, FullMaskAndSinglePixel) {
  BinaryMask full = BinaryMask::Zeros(5, 5);
  for (auto& b : full.bits) b = 1;
  EXPECT_EQ(OracleBand(full, 1).mask.Count(), 16);
  BinaryMask dot = BinaryMask::Zeros(5, 5);
  dot.set(2, 2, true);
  EXPECT_EQ(OracleBand(dot, 1).mask, dot);
}

TEST(OracleTest, FramesTooLarge) {
  const BinaryMask big = BinaryMask::Zeros(kMaxBandSide + 1, 2);
  try {
    OracleBand(big, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFrameTooLarge);
  }
  const LabelMap wide = LabelMap::Empty(kMaxContingencySide + 1, 1);
  EXPECT_THROW(OracleContingency(wide, wide), Error);
}

TEST(OracleBandRadiusTest, AgreesWithFastPath) {
  for (int w : {1, 7, 30, 64}) {
    for (int h : {1, 9, 64}) {
      for (double d : {0.001, 0.02, 0.1, 0.5, 1.0}) {
        EXPECT_EQ(OracleBandRadius(d, w, h), BandRadius(d, w, h));
      }
    }
  }
}

TEST(OracleMetricsTest, MatchesPipeline) {
  std::vector<PanopticAnnotation> gt;
  std::vector<PanopticAnnotation> pred;
  for (int i = 0; i < 6; ++i) {
    SceneSpec spec;
    spec.seed = 100 + i;
    spec.width = spec.height = 32;
    spec.num_classes = 2;
    spec.min_instances = 0;
    spec.image_id = std::to_string(i);
    gt.push_back(GenerateScene(spec));
    pred.push_back(PerturbAll(gt.back(), {{PerturbationKind::kErode, 1, 1},
                                          {PerturbationKind::kMerge, 0.5, 2},
                                          {PerturbationKind::kSpurious, 1, 3}}));
  }
  MetricConfig config;
  config.all_aggregates = true;
  const auto problems = CompareReports(EvaluateAnnotations(gt, pred, config),
                                       OracleMetrics(gt, pred, config), 1e-12);
  EXPECT_TRUE(problems.empty()) << problems.front();
}

TEST(CompareReportsTest, FlagsDifferences) {
  const auto gt = PaintAnnotation("a", 8, 8, {{0, 0, 4, 4}});
  const std::vector<PanopticAnnotation> set{gt};
  const MetricReport a = OracleMetrics(set, set, {});
  MetricReport b = a;
  b.aggregate.pq = 0.5;
  EXPECT_TRUE(CompareReports(a, a, 0).empty());
  EXPECT_FALSE(CompareReports(b, a, 1e-12).empty());
}

}  // namespace
}  // namespace pqsuite::oracle
