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

#include "pqsuite/matching.h"

#include <set>
#include <tuple>

#include "gtest/gtest.h"
#include "pqsuite/error.h"
#include "pqsuite/segmap.h"
#include "pqsuite/synth.h"
#include "test_util.h"

namespace pqsuite {
namespace {

using ::pqsuite::testing::Paint;
using ::pqsuite::testing::PaintAnnotation;

MatchResult MatchAnnotations(const PanopticAnnotation& gt,
                             const PanopticAnnotation& pred,
                             const MatchOptions& options = {}) {
  const auto table = Contingency(gt.label_map, pred.label_map);
  return ApplyVoidRule(
      MatchSegments(table, gt.segments, pred.segments, options), table);
}

TEST(ContingencyTest, CountsEveryPixelOnce) {
  const LabelMap gt = Paint(6, 4, {{0, 0, 3, 4, 1, 1}});
  const LabelMap pred = Paint(6, 4, {{1, 0, 3, 4, 1, 9}});
  const auto t = Contingency(gt, pred);
  EXPECT_EQ(t.Intersection(1, 9), 8);
  EXPECT_EQ(t.gt_area.at(1), 12);
  EXPECT_EQ(t.pred_area.at(9), 12);
  EXPECT_EQ(t.VoidOverlap(9), 4);
  EXPECT_EQ(t.gt_unpredicted.at(1), 4);
  EXPECT_EQ(t.void_both, 8);
}

TEST(ContingencyTest, FramesMustAgree) {
  try {
    Contingency(LabelMap::Empty(3, 3), LabelMap::Empty(3, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(IouTest, ShiftedSquare) {
  EXPECT_DOUBLE_EQ(Iou(12, 16, 16), 0.6);
  EXPECT_DOUBLE_EQ(Iou(16, 16, 16), 1.0);
  EXPECT_DOUBLE_EQ(Iou(0, 3, 5), 0.0);
}

TEST(IouTest, InvalidCounts) {
  for (auto [i, g, p] : {std::tuple{5, 4, 9}, {-1, 4, 4}, {0, 0, 4}}) {
    try {
      Iou(i, g, p);
      ADD_FAILURE() << i << " " << g << " " << p;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidCounts);
    }
  }
}

TEST(MatchSegmentsTest, ShiftedSquareIsTruePositive) {
  const auto gt = PaintAnnotation("a", 8, 8, {{0, 0, 4, 4, 1, 1}});
  const auto pred = PaintAnnotation("a", 8, 8, {{1, 0, 4, 4, 1, 3}});
  const auto result = MatchAnnotations(gt, pred);
  const ClassMatch* cm = result.Find(1);
  ASSERT_NE(cm, nullptr);
  ASSERT_EQ(cm->tp.size(), 1u);
  EXPECT_DOUBLE_EQ(cm->tp[0].iou, 0.6);
  EXPECT_TRUE(cm->fp.empty());
  EXPECT_TRUE(cm->fn.empty());
}

TEST(MatchSegmentsTest, ExactlyHalfIsNotAMatch) {
  const auto gt = PaintAnnotation("a", 8, 8, {{2, 2, 4, 4, 1, 1}});
  const auto pred = PaintAnnotation("a", 8, 8, {{2, 2, 4, 2, 1, 1}});
  auto cm = *MatchAnnotations(gt, pred).Find(1);
  EXPECT_TRUE(cm.tp.empty());
  EXPECT_EQ(cm.fp, std::vector<SegmentId>{1});
  EXPECT_EQ(cm.fn, std::vector<SegmentId>{1});

  cm = *MatchAnnotations(gt, pred, {.inclusive_threshold = true}).Find(1);
  EXPECT_EQ(cm.tp.size(), 1u);
}

TEST(MatchSegmentsTest, ClassesMustAgree) {
  const auto gt = PaintAnnotation("a", 4, 4, {{0, 0, 4, 4, 1, 1}});
  const auto pred = PaintAnnotation("a", 4, 4, {{0, 0, 4, 4, 2, 1}});
  const auto result = MatchAnnotations(gt, pred);
  EXPECT_EQ(result.Find(1)->fn.size(), 1u);
  EXPECT_EQ(result.Find(2)->fp.size(), 1u);
}

TEST(MatchSegmentsTest, LowThresholdGreedyOrder) {
  // Pred 5 covers half of gt 1 and gt 2. The tie on IoU goes to gt 1.
  const auto gt = PaintAnnotation("a", 8, 2,
                                  {{0, 0, 4, 2, 1, 1}, {4, 0, 4, 2, 1, 2}});
  const auto pred = PaintAnnotation("a", 8, 2, {{2, 0, 4, 2, 1, 5}});
  const auto cm = *MatchAnnotations(gt, pred, {.threshold = 0.2}).Find(1);
  ASSERT_EQ(cm.tp.size(), 1u);
  EXPECT_EQ(cm.tp[0].gt, 1u);
  EXPECT_EQ(cm.fn, std::vector<SegmentId>{2});
}

TEST(ApplyVoidRuleTest, MostlyVoidPredictionIsDiscarded) {
  const auto gt = PaintAnnotation("a", 10, 2, {{0, 0, 2, 2, 1, 1}});
  const auto pred = PaintAnnotation("a", 10, 2, {{0, 0, 2, 2, 1, 1},
                                                 {5, 0, 5, 2, 1, 2}});
  const auto cm = *MatchAnnotations(gt, pred).Find(1);
  EXPECT_EQ(cm.tp.size(), 1u);
  EXPECT_TRUE(cm.fp.empty());
  EXPECT_EQ(cm.discarded, std::vector<SegmentId>{2});
}

TEST(ApplyVoidRuleTest, HalfOnVoidIsKept) {
  const auto gt = PaintAnnotation("a", 8, 2, {{0, 0, 4, 2, 2, 1}});
  const auto pred = PaintAnnotation("a", 8, 2, {{2, 0, 4, 2, 1, 1}});
  const auto cm = *MatchAnnotations(gt, pred).Find(1);
  EXPECT_EQ(cm.fp, std::vector<SegmentId>{1});
  EXPECT_TRUE(cm.discarded.empty());
}

TEST(ApplyVoidRuleTest, CrowdAbsorbsSameClassPrediction) {
  auto gt = PaintAnnotation("a", 8, 8, {{0, 0, 8, 8, 1, 1}});
  gt.segments[0].ignore = true;
  const auto pred = PaintAnnotation("a", 8, 8, {{1, 1, 3, 3, 1, 4}});
  const auto cm = *MatchAnnotations(gt, pred).Find(1);
  EXPECT_EQ(cm.ignored_gt, std::vector<SegmentId>{1});
  EXPECT_TRUE(cm.fn.empty());
  EXPECT_TRUE(cm.tp.empty());
  EXPECT_EQ(cm.discarded, std::vector<SegmentId>{4});
}

TEST(MatchSegmentsTest, EverySegmentAccountedForOnce) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    spec.width = spec.height = 40;
    spec.num_classes = 3;
    spec.min_instances = 0;
    spec.max_instances = 4;
    const auto gt = GenerateScene(spec);
    const auto pred = PerturbAll(gt, {{PerturbationKind::kShift, 2, seed},
                                      {PerturbationKind::kSplit, 0.3, seed},
                                      {PerturbationKind::kSpurious, 2, seed}});
    const auto result = MatchAnnotations(gt, pred);
    std::multiset<SegmentId> gt_seen;
    std::multiset<SegmentId> pred_seen;
    for (const ClassMatch& cm : result.classes) {
      for (const TpPair& tp : cm.tp) {
        EXPECT_GT(tp.iou, 0.5);
        gt_seen.insert(tp.gt);
        pred_seen.insert(tp.pred);
      }
      gt_seen.insert(cm.fn.begin(), cm.fn.end());
      gt_seen.insert(cm.ignored_gt.begin(), cm.ignored_gt.end());
      pred_seen.insert(cm.fp.begin(), cm.fp.end());
      pred_seen.insert(cm.discarded.begin(), cm.discarded.end());
    }
    EXPECT_EQ(gt_seen.size(), gt.segments.size()) << seed;
    EXPECT_EQ(pred_seen.size(), pred.segments.size()) << seed;
    for (const auto& s : gt.segments) EXPECT_EQ(gt_seen.count(s.segment_id), 1u);
    for (const auto& s : pred.segments) {
      EXPECT_EQ(pred_seen.count(s.segment_id), 1u);
    }
  }
}

}  // namespace
}  // namespace pqsuite
