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

#include "pqsuite/color.h"

#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "pqsuite/segmap.h"
#include "test_util.h"

namespace pqsuite {
namespace {

using ::pqsuite::testing::PaintAnnotation;

TEST(ColorTest, SameInputsSameColor) {
  EXPECT_EQ(GenerateColor(2, 17, 99), GenerateColor(2, 17, 99));
}

TEST(ColorTest, ThousandSegmentsGetDistinctColors) {
  std::vector<SegmentRecord> segments;
  for (SegmentId id = 1; id <= 1000; ++id) {
    segments.push_back({id, 1 + id % 5, 10, false});
  }
  const auto palette = AssignPalette(segments, 3);
  ASSERT_EQ(palette.size(), 1000u);
  std::set<Rgb> seen;
  for (const auto& [id, rgb] : palette) {
    EXPECT_NE(rgb, kVoidColor);
    seen.insert(rgb);
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(ColorTest, SeedChangesPalette) {
  std::vector<SegmentRecord> segments;
  for (SegmentId id = 1; id <= 20; ++id) segments.push_back({id, 1, 1, false});
  std::multiset<Rgb> a;
  std::multiset<Rgb> b;
  for (const auto& [id, rgb] : AssignPalette(segments, 1)) a.insert(rgb);
  for (const auto& [id, rgb] : AssignPalette(segments, 2)) b.insert(rgb);
  EXPECT_NE(a, b);
}

TEST(RenderTest, AllVoidIsBlack) {
  const auto image = RenderVisualization(PaintAnnotation("v", 5, 4, {}), 0);
  ASSERT_EQ(image.width, 5);
  ASSERT_EQ(image.height, 4);
  for (std::uint8_t v : image.rgb) EXPECT_EQ(v, 0);
}

TEST(RenderTest, OneSegmentTwoColors) {
  const auto ann = PaintAnnotation("s", 6, 6, {{1, 1, 3, 3, 1, 7}});
  const auto image = RenderVisualization(ann, 11);
  std::set<Rgb> colors;
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) {
      const std::size_t o = image.Offset(x, y);
      colors.insert({image.rgb[o], image.rgb[o + 1], image.rgb[o + 2]});
    }
  }
  EXPECT_EQ(colors.size(), 2u);
  EXPECT_TRUE(colors.contains(kVoidColor));
  EXPECT_EQ(RenderVisualization(ann, 11), image);
}

TEST(RenderTest, ContoursOutlineSegments) {
  const auto ann = PaintAnnotation("s", 7, 7, {{1, 1, 5, 5, 1, 7}});
  const auto image = RenderVisualization(ann, 11, {.contours = true});
  const std::size_t edge = image.Offset(1, 1);
  const std::size_t centre = image.Offset(3, 3);
  EXPECT_EQ((Rgb{image.rgb[edge], image.rgb[edge + 1], image.rgb[edge + 2]}),
            kContourColor);
  EXPECT_NE(
      (Rgb{image.rgb[centre], image.rgb[centre + 1], image.rgb[centre + 2]}),
      kContourColor);
}

TEST(RenderTest, SideBySideWidth) {
  const RgbImage left{5, 3, std::vector<std::uint8_t>(45, 10)};
  const RgbImage right{5, 3, std::vector<std::uint8_t>(45, 20)};
  const RgbImage both = ComposeSideBySide(left, right, 4);
  EXPECT_EQ(both.width, 14);
  EXPECT_EQ(both.height, 3);
  EXPECT_EQ(both.rgb[both.Offset(0, 0)], 10);
  EXPECT_EQ(both.rgb[both.Offset(13, 2)], 20);
}

}  // namespace
}  // namespace pqsuite
