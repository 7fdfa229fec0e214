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

#ifndef PQSUITE_COLOR_H_
#define PQSUITE_COLOR_H_

#include <compare>
#include <cstdint>
#include <map>
#include <span>

#include "pqsuite/png_codec.h"
#include "pqsuite/segmap.h"

namespace pqsuite {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  auto operator<=>(const Rgb&) const = default;
};

inline constexpr Rgb kVoidColor{0, 0, 0};
inline constexpr Rgb kContourColor{255, 255, 255};

// Hash-derived color of a segment. `probe` selects the re-probe sequence
// used to resolve collisions.
Rgb GenerateColor(ClassId class_id, SegmentId segment_id,
                  std::uint64_t palette_seed, std::uint32_t probe = 0);

// Distinct colors for every segment of one image, assigned in
// (class_id, segment_id) order. Colors never equal kVoidColor or
// kContourColor; collisions move to the next probe.
std::map<SegmentId, Rgb> AssignPalette(std::span<const SegmentRecord> segments,
                                       std::uint64_t palette_seed);

struct RenderOptions {
  bool contours = false;  // 1-pixel kContourColor outline on segment edges
};

RgbImage RenderVisualization(const PanopticAnnotation& annotation,
                             std::uint64_t palette_seed,
                             const RenderOptions& options = {});

// left | separator | right. Output width is
// left.width + separator_px + right.width; the shorter panel is padded black.
RgbImage ComposeSideBySide(const RgbImage& left, const RgbImage& right,
                           int separator_px = 4);

}  // namespace pqsuite

#endif  // PQSUITE_COLOR_H_
