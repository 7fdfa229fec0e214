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

#include "pqsuite/segmap.h"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>

#include "pqsuite/error.h"

namespace pqsuite {

LabelMap LabelMap::Build(std::span<const std::uint32_t> class_plane,
                         std::span<const std::uint32_t> instance_plane,
                         int width, int height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kDimensionMismatch, "negative frame size");
  }
  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (class_plane.size() != n || instance_plane.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(n) + " pixels, got class=" +
                    std::to_string(class_plane.size()) + " instance=" +
                    std::to_string(instance_plane.size()));
  }

  std::unordered_map<SegmentId, ClassId> class_of_segment;
  for (std::size_t i = 0; i < n; ++i) {
    const SegmentId id = instance_plane[i];
    if (id == kNoInstance) continue;
    const ClassId cls = class_plane[i];
    if (cls == kVoidClass) {
      throw Error(ErrorCode::kInvariantViolation,
                  "instance " + std::to_string(id) + " on void pixel " +
                      std::to_string(i));
    }
    auto [it, inserted] = class_of_segment.try_emplace(id, cls);
    if (!inserted && it->second != cls) {
      throw Error(ErrorCode::kInvariantViolation,
                  "instance " + std::to_string(id) + " carries classes " +
                      std::to_string(it->second) + " and " +
                      std::to_string(cls));
    }
  }

  LabelMap map;
  map.width_ = width;
  map.height_ = height;
  map.class_of_.assign(class_plane.begin(), class_plane.end());
  map.instance_of_.assign(instance_plane.begin(), instance_plane.end());
  return map;
}

LabelMap LabelMap::Empty(int width, int height) {
  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint32_t> zeros(n, 0);
  return Build(zeros, zeros, width, height);
}

std::vector<SegmentRecord> SegmentTable(const LabelMap& map) {
  std::unordered_map<SegmentId, SegmentRecord> by_id;
  const auto classes = map.class_plane();
  const auto instances = map.instance_plane();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const SegmentId id = instances[i];
    if (id == kNoInstance) continue;
    SegmentRecord& rec = by_id[id];
    rec.segment_id = id;
    rec.class_id = classes[i];
    ++rec.area;
  }
  std::vector<SegmentRecord> table;
  table.reserve(by_id.size());
  for (auto& [id, rec] : by_id) table.push_back(rec);
  std::sort(table.begin(), table.end(),
            [](const SegmentRecord& a, const SegmentRecord& b) {
              return std::pair(a.class_id, a.segment_id) <
                     std::pair(b.class_id, b.segment_id);
            });
  return table;
}

PanopticAnnotation MakeAnnotation(std::string image_id, LabelMap map) {
  PanopticAnnotation ann;
  ann.image_id = std::move(image_id);
  ann.segments = SegmentTable(map);
  ann.label_map = std::move(map);
  return ann;
}

std::map<SegmentId, Box> SegmentBoxes(const LabelMap& map) {
  std::map<SegmentId, Box> boxes;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const SegmentId id = map.instance_at(x, y);
      if (id == kNoInstance) continue;
      auto [it, inserted] = boxes.try_emplace(id, Box{x, y, x + 1, y + 1});
      if (inserted) continue;
      Box& b = it->second;
      b.x0 = std::min(b.x0, x);
      b.y0 = std::min(b.y0, y);
      b.x1 = std::max(b.x1, x + 1);
      b.y1 = std::max(b.y1, y + 1);
    }
  }
  return boxes;
}

const char* ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kPhantomRow: return "PhantomRow";
    case ViolationKind::kMissingRow: return "MissingRow";
    case ViolationKind::kAreaMismatch: return "AreaMismatch";
    case ViolationKind::kDuplicateId: return "DuplicateId";
    case ViolationKind::kClassMismatch: return "ClassMismatch";
  }
  return "Unknown";
}

std::vector<Violation> Validate(const PanopticAnnotation& annotation) {
  std::vector<Violation> violations;
  std::map<SegmentId, SegmentRecord> actual;
  for (const SegmentRecord& rec : SegmentTable(annotation.label_map)) {
    actual.emplace(rec.segment_id, rec);
  }

  std::map<SegmentId, int> rows_per_id;
  for (const SegmentRecord& row : annotation.segments) {
    if (++rows_per_id[row.segment_id] == 2) {
      violations.push_back({ViolationKind::kDuplicateId, row.segment_id,
                            "segment id listed more than once"});
    }
  }

  for (const SegmentRecord& row : annotation.segments) {
    if (rows_per_id[row.segment_id] > 1) continue;
    auto it = actual.find(row.segment_id);
    if (it == actual.end()) {
      violations.push_back({ViolationKind::kPhantomRow, row.segment_id,
                            "no pixels carry this segment"});
      continue;
    }
    if (it->second.class_id != row.class_id) {
      violations.push_back(
          {ViolationKind::kClassMismatch, row.segment_id,
           "table class " + std::to_string(row.class_id) + ", map class " +
               std::to_string(it->second.class_id)});
    }
    if (it->second.area != row.area) {
      violations.push_back(
          {ViolationKind::kAreaMismatch, row.segment_id,
           "table area " + std::to_string(row.area) + ", map area " +
               std::to_string(it->second.area)});
    }
  }

  for (const auto& [id, rec] : actual) {
    if (!rows_per_id.contains(id)) {
      violations.push_back({ViolationKind::kMissingRow, id,
                            "segment has pixels but no table row"});
    }
  }
  return violations;
}

}  // namespace pqsuite
