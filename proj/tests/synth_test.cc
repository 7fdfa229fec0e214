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

#include "pqsuite/synth.h"

#include <set>

#include "gtest/gtest.h"
#include "pqsuite/error.h"
#include "pqsuite/segmap.h"

namespace pqsuite {
namespace {

SceneSpec TwoByThree() {
  SceneSpec spec;
  spec.seed = 12;
  spec.width = spec.height = 64;
  spec.num_classes = 2;
  spec.instances_per_class = {3, 3};
  return spec;
}

TEST(SplitMix64Test, DeterministicStreams) {
  SplitMix64 a(1);
  SplitMix64 b(1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.Next(), b.Next());
  EXPECT_NE(SplitMix64(1).Split(2).Next(), SplitMix64(1).Split(3).Next());
  SplitMix64 r(9);
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.UniformInt(-2, 2);
    EXPECT_GE(v, -2);
    EXPECT_LE(v, 2);
    const double u = r.Uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(GenerateSceneTest, SameSeedSameScene) {
  EXPECT_EQ(GenerateScene(TwoByThree()), GenerateScene(TwoByThree()));
  SceneSpec other = TwoByThree();
  other.seed = 13;
  EXPECT_NE(GenerateScene(other), GenerateScene(TwoByThree()));
}

TEST(GenerateSceneTest, ZeroInstancesIsAllVoid) {
  SceneSpec spec;
  spec.min_instances = spec.max_instances = 0;
  const auto scene = GenerateScene(spec);
  EXPECT_TRUE(scene.segments.empty());
  for (auto c : scene.label_map.class_plane()) EXPECT_EQ(c, kVoidClass);
}

TEST(GenerateSceneTest, ExactCountsPerClass) {
  const auto scene = GenerateScene(TwoByThree());
  ASSERT_EQ(scene.segments.size(), 6u);
  int per_class[3] = {0, 0, 0};
  for (const auto& s : scene.segments) ++per_class[s.class_id];
  EXPECT_EQ(per_class[1], 3);
  EXPECT_EQ(per_class[2], 3);
  EXPECT_TRUE(Validate(scene).empty());
}

TEST(GenerateSceneTest, ValidAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SceneSpec spec;
    spec.seed = seed;
    spec.num_classes = 4;
    spec.max_instances = 5;
    const auto scene = GenerateScene(spec);
    EXPECT_TRUE(Validate(scene).empty()) << seed;
  }
}

TEST(GenerateSceneTest, Infeasible) {
  SceneSpec spec;
  spec.width = spec.height = 12;
  spec.instances_per_class = {20, 20};
  spec.min_radius = spec.max_radius = 4;
  try {
    GenerateScene(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleSpec);
  }
  spec = {};
  spec.min_radius = 1.0;
  EXPECT_THROW(GenerateScene(spec), Error);
}

TEST(PerturbTest, ZeroMagnitudeIsIdentity) {
  auto scene = GenerateScene(TwoByThree());
  scene.segments[0].ignore = true;
  for (int k = 0; k <= static_cast<int>(PerturbationKind::kRelabel); ++k) {
    const Perturbation p{static_cast<PerturbationKind>(k), 0.0, 3};
    EXPECT_EQ(Perturb(scene, p), scene) << ToString(p.kind);
  }
}

TEST(PerturbTest, EveryKindKeepsTableConsistent) {
  const auto scene = GenerateScene(TwoByThree());
  for (int k = 0; k <= static_cast<int>(PerturbationKind::kRelabel); ++k) {
    const Perturbation p{static_cast<PerturbationKind>(k), 1.0, 3};
    const auto out = Perturb(scene, p);
    EXPECT_TRUE(Validate(out).empty()) << ToString(p.kind);
    EXPECT_EQ(Perturb(scene, p), out) << ToString(p.kind);
  }
}

std::int64_t Area(const PanopticAnnotation& a) {
  std::int64_t n = 0;
  for (const auto& s : a.segments) n += s.area;
  return n;
}

TEST(PerturbTest, ErosionShrinksAndDilationGrows) {
  const auto scene = GenerateScene(TwoByThree());
  std::int64_t previous = Area(scene);
  for (int m = 1; m <= 4; ++m) {
    const auto eroded = Perturb(scene, {PerturbationKind::kErode, 1.0 * m, 0});
    EXPECT_LT(Area(eroded), previous);
    previous = Area(eroded);
  }
  EXPECT_GT(Area(Perturb(scene, {PerturbationKind::kDilate, 1, 0})),
            Area(scene));
}

TEST(PerturbTest, DropAndSplitChangeCounts) {
  const auto scene = GenerateScene(TwoByThree());
  EXPECT_TRUE(Perturb(scene, {PerturbationKind::kDrop, 1, 0}).segments.empty());
  EXPECT_EQ(Perturb(scene, {PerturbationKind::kSplit, 1, 0}).segments.size(),
            12u);
  EXPECT_EQ(Perturb(scene, {PerturbationKind::kSpurious, 3, 0}).segments.size(),
            9u);
}

TEST(ParsePerturbationTest, Forms) {
  const Perturbation p = ParsePerturbation("erode:2");
  EXPECT_EQ(p.kind, PerturbationKind::kErode);
  EXPECT_EQ(p.magnitude, 2.0);
  const Perturbation q = ParsePerturbation("relabel:0.25:9");
  EXPECT_EQ(q.kind, PerturbationKind::kRelabel);
  EXPECT_EQ(q.seed, 9u);
  EXPECT_EQ(ParsePerturbation("relabel-class:1").kind,
            PerturbationKind::kRelabel);
  EXPECT_THROW(ParsePerturbation("blur:1"), Error);
  EXPECT_THROW(ParsePerturbation("erode"), Error);
  EXPECT_THROW(ParsePerturbation("erode:x"), Error);
}

}  // namespace
}  // namespace pqsuite
