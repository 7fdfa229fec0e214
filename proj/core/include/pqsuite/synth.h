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

#ifndef PQSUITE_SYNTH_H_
#define PQSUITE_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pqsuite/segmap.h"

namespace pqsuite {

// SplitMix64. Split() derives an independent generator from the seed and a
// stream number, so streams do not depend on how many draws others made.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t Next();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);
  bool Bernoulli(double p) { return Uniform() < p; }

  SplitMix64 Split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int width = 64;
  int height = 64;
  int num_classes = 2;
  // Instances per class drawn uniformly from [min, max] unless
  // `instances_per_class` gives the exact count for each class 1..n.
  int min_instances = 1;
  int max_instances = 3;
  std::vector<int> instances_per_class;
  double min_radius = 2.0;
  double max_radius = 5.0;
  // Per-class radius multipliers, for class-imbalanced scenes.
  std::vector<double> class_radius_scale;
  // Minimum Chebyshev distance in pixels between blobs of different segments.
  int min_gap = 1;
  int max_attempts = 200;
  std::string image_id = "0";
};

// Non-overlapping disk blobs, segment ids 1..n in (class, blob) order.
// Throws Error(kInvalidParameter) for malformed specs and
// Error(kInfeasibleSpec) when the expected blob area reaches 60% of the frame
// or a blob cannot be placed within max_attempts.
PanopticAnnotation GenerateScene(const SceneSpec& spec);

enum class PerturbationKind {
  kErode,    // magnitude = 4-neighbourhood erosion steps
  kDilate,   // magnitude = growth steps into void, lower id wins ties
  kShift,    // magnitude = pixels; direction drawn per segment
  kSplit,    // magnitude = probability of cutting a segment in two
  kMerge,    // magnitude = probability of absorbing the nearest same-class
             // segment
  kDrop,     // magnitude = probability of removing a segment
  kSpurious, // magnitude = number of blobs injected into void
  kRelabel,  // magnitude = probability of changing a segment's class
};

struct Perturbation {
  PerturbationKind kind = PerturbationKind::kErode;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
};

std::string_view ToString(PerturbationKind kind);
// "kind:magnitude" or "kind:magnitude:seed", kinds spelled as ToString
// (erode, dilate, shift, split, merge, drop, spurious, relabel-class).
Perturbation ParsePerturbation(std::string_view text);

// Always returns a valid annotation; magnitude 0 is the identity. Segments
// may vanish, which downstream scoring treats as FNs.
PanopticAnnotation Perturb(const PanopticAnnotation& annotation,
                           const Perturbation& perturbation);

// Applies perturbations left to right.
PanopticAnnotation PerturbAll(const PanopticAnnotation& annotation,
                              const std::vector<Perturbation>& perturbations);

}  // namespace pqsuite

#endif  // PQSUITE_SYNTH_H_
