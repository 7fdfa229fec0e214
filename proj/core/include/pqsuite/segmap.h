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

#ifndef PQSUITE_SEGMAP_H_
#define PQSUITE_SEGMAP_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pqsuite {

using ClassId = std::uint32_t;
using SegmentId = std::uint32_t;

// Class id 0 is void. Background tissue lives there unless ingestion is told
// to promote it to a scored class.
inline constexpr ClassId kVoidClass = 0;
inline constexpr SegmentId kNoInstance = 0;

// Per-pixel panoptic labeling of one image. Row-major, immutable once built.
//
// A segment is identified by its instance id. Instance ids are unique within
// the image, so every nonzero instance id carries exactly one class; pixels
// with instance 0 belong to no segment.
class LabelMap {
 public:
  LabelMap() = default;

  // Validates and copies the two planes.
  // Throws Error(kDimensionMismatch) when a plane does not hold width*height
  // entries, Error(kInvariantViolation) for an instance on a void pixel or an
  // instance id that appears with two different classes.
  static LabelMap Build(std::span<const std::uint32_t> class_plane,
                        std::span<const std::uint32_t> instance_plane,
                        int width, int height);

  // All-void map.
  static LabelMap Empty(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return class_of_.size(); }

  ClassId class_at(int x, int y) const { return class_of_[Index(x, y)]; }
  SegmentId instance_at(int x, int y) const {
    return instance_of_[Index(x, y)];
  }

  std::span<const std::uint32_t> class_plane() const { return class_of_; }
  std::span<const std::uint32_t> instance_plane() const {
    return instance_of_;
  }

  bool operator==(const LabelMap&) const = default;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> class_of_;
  std::vector<std::uint32_t> instance_of_;
};

struct SegmentRecord {
  SegmentId segment_id = 0;
  ClassId class_id = 0;
  std::int64_t area = 0;
  // COCO iscrowd. Ignored gt segments are excluded from scoring.
  bool ignore = false;

  bool operator==(const SegmentRecord&) const = default;
};

struct PanopticAnnotation {
  std::string image_id;
  LabelMap label_map;
  std::vector<SegmentRecord> segments;

  bool operator==(const PanopticAnnotation&) const = default;
};

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool operator==(const Box&) const = default;
};

// One record per segment in the map, ordered by (class_id, segment_id).
std::vector<SegmentRecord> SegmentTable(const LabelMap& map);

// Annotation whose segment table is derived from the map itself.
PanopticAnnotation MakeAnnotation(std::string image_id, LabelMap map);

// Tight bounding boxes of every segment in the map.
std::map<SegmentId, Box> SegmentBoxes(const LabelMap& map);

enum class ViolationKind {
  kPhantomRow,     // table row whose segment has no pixels
  kMissingRow,     // segment present in the map without a table row
  kAreaMismatch,
  kDuplicateId,
  kClassMismatch,  // table class disagrees with the map
};

struct Violation {
  ViolationKind kind;
  SegmentId segment_id = 0;
  std::string detail;
};

const char* ViolationKindName(ViolationKind kind);

// Structural consistency between an annotation's map and its segment table.
// An empty result means the annotation is valid.
std::vector<Violation> Validate(const PanopticAnnotation& annotation);

}  // namespace pqsuite

#endif  // PQSUITE_SEGMAP_H_
