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

#include <algorithm>
#include <set>
#include <vector>

namespace pqsuite {
namespace {

std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Put(RgbImage& image, int x, int y, Rgb c) {
  const std::size_t o = image.Offset(x, y);
  image.rgb[o] = c.r;
  image.rgb[o + 1] = c.g;
  image.rgb[o + 2] = c.b;
}

}  // namespace

Rgb GenerateColor(ClassId class_id, SegmentId segment_id,
                  std::uint64_t palette_seed, std::uint32_t probe) {
  std::uint64_t h = Mix64(palette_seed + 0x9e3779b97f4a7c15ULL);
  h = Mix64(h ^ (static_cast<std::uint64_t>(class_id) << 32 | segment_id));
  h = Mix64(h + 0x632be59bd9b4e019ULL * (static_cast<std::uint64_t>(probe) + 1));
  return Rgb{static_cast<std::uint8_t>(h), static_cast<std::uint8_t>(h >> 8),
             static_cast<std::uint8_t>(h >> 16)};
}

std::map<SegmentId, Rgb> AssignPalette(std::span<const SegmentRecord> segments,
                                       std::uint64_t palette_seed) {
  std::vector<SegmentRecord> ordered(segments.begin(), segments.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const SegmentRecord& a, const SegmentRecord& b) {
              return std::pair(a.class_id, a.segment_id) <
                     std::pair(b.class_id, b.segment_id);
            });
  std::set<Rgb> used{kVoidColor, kContourColor};
  std::map<SegmentId, Rgb> palette;
  for (const SegmentRecord& rec : ordered) {
    if (palette.contains(rec.segment_id)) continue;
    for (std::uint32_t probe = 0;; ++probe) {
      const Rgb c = GenerateColor(rec.class_id, rec.segment_id, palette_seed,
                                  probe);
      if (used.insert(c).second) {
        palette.emplace(rec.segment_id, c);
        break;
      }
    }
  }
  return palette;
}

RgbImage RenderVisualization(const PanopticAnnotation& annotation,
                             std::uint64_t palette_seed,
                             const RenderOptions& options) {
  const LabelMap& map = annotation.label_map;
  const auto segments = SegmentTable(map);
  const auto palette = AssignPalette(segments, palette_seed);

  RgbImage image;
  image.width = map.width();
  image.height = map.height();
  image.rgb.assign(3 * map.pixel_count(), 0);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const SegmentId id = map.instance_at(x, y);
      if (id == kNoInstance) continue;
      Rgb c = palette.at(id);
      if (options.contours) {
        const bool edge = x == 0 || y == 0 || x + 1 == map.width() ||
                          y + 1 == map.height() ||
                          map.instance_at(x - 1, y) != id ||
                          map.instance_at(x + 1, y) != id ||
                          map.instance_at(x, y - 1) != id ||
                          map.instance_at(x, y + 1) != id;
        if (edge) c = kContourColor;
      }
      Put(image, x, y, c);
    }
  }
  return image;
}

RgbImage ComposeSideBySide(const RgbImage& left, const RgbImage& right,
                           int separator_px) {
  RgbImage out;
  out.width = left.width + separator_px + right.width;
  out.height = std::max(left.height, right.height);
  out.rgb.assign(3 * static_cast<std::size_t>(out.width) *
                     static_cast<std::size_t>(out.height),
                 0);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < separator_px; ++x) {
      Put(out, left.width + x, y, kContourColor);
    }
    for (int x = 0; x < left.width && y < left.height; ++x) {
      const std::size_t o = left.Offset(x, y);
      Put(out, x, y, {left.rgb[o], left.rgb[o + 1], left.rgb[o + 2]});
    }
    for (int x = 0; x < right.width && y < right.height; ++x) {
      const std::size_t o = right.Offset(x, y);
      Put(out, left.width + separator_px + x, y,
          {right.rgb[o], right.rgb[o + 1], right.rgb[o + 2]});
    }
  }
  return out;
}

}  // namespace pqsuite
