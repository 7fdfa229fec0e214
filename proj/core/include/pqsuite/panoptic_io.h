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

#ifndef PQSUITE_PANOPTIC_IO_H_
#define PQSUITE_PANOPTIC_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqsuite/png_codec.h"
#include "pqsuite/segmap.h"

namespace pqsuite {

// Capacity of the RGB id encoding: id = R + 256*G + 65536*B.
inline constexpr std::uint32_t kPanopticIdLimit = 1u << 24;

struct IdMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> ids;  // 0 = void

  bool operator==(const IdMap&) const = default;
};

IdMap IdMapFromRgb(const RgbImage& image);
// Throws Error(kIdOverflow) for any id >= 2^24.
RgbImage RgbFromIdMap(const IdMap& map);

IdMap DecodePanopticPng(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodePanopticPng(const IdMap& map);

// COCO panoptic manifest. Field names follow the COCO layout verbatim.
struct Category {
  ClassId id = 0;
  std::string name;
  bool isthing = true;
  std::string supercategory;

  bool operator==(const Category&) const = default;
};

struct ImageEntry {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::string file_name;

  bool operator==(const ImageEntry&) const = default;
};

struct SegmentInfo {
  SegmentId id = 0;
  ClassId category_id = 0;
  std::int64_t area = 0;
  std::array<int, 4> bbox{};  // x, y, width, height
  bool iscrowd = false;

  bool operator==(const SegmentInfo&) const = default;
};

struct AnnotationEntry {
  std::string image_id;
  std::string file_name;  // PNG, relative to the dataset's PNG root
  std::vector<SegmentInfo> segments_info;

  bool operator==(const AnnotationEntry&) const = default;
};

struct DatasetManifest {
  std::map<ClassId, Category> categories;
  std::vector<ImageEntry> images;
  std::vector<AnnotationEntry> annotations;

  const ImageEntry* FindImage(std::string_view image_id) const;
  const AnnotationEntry* FindAnnotation(std::string_view image_id) const;

  bool operator==(const DatasetManifest&) const = default;
};

// Integer image ids are read into their decimal string form and written back
// as integers, so COCO files round-trip. Throws Error(kParseError).
DatasetManifest ParseManifest(std::string_view json_text);
std::string SerializeManifest(const DatasetManifest& manifest);

// Referential problems: unknown category ids, annotations for unlisted images.
std::vector<std::string> CheckManifest(const DatasetManifest& manifest);

// A manifest plus the directory holding its PNG id maps.
struct Dataset {
  DatasetManifest manifest;
  std::filesystem::path png_root;
};

// For X.json the PNG root is the sibling directory X/ when it exists,
// otherwise the directory containing X.json.
std::filesystem::path DefaultPngRoot(const std::filesystem::path& json_path);

Dataset ReadDataset(const std::filesystem::path& json_path,
                    const std::optional<std::filesystem::path>& png_root = {});

// Joins an id map with its segments_info rows. Throws
// Error(kUnknownSegmentId) for ids present in the map but not in the table,
// Error(kCategoryMissing) for rows whose category is not declared.
PanopticAnnotation AnnotationFromIdMap(
    const IdMap& map, const AnnotationEntry& entry,
    const std::map<ClassId, Category>& categories);

// Throws Error(kMissingImage) when the manifest has no annotation for the id,
// Error(kMissingFile) when the PNG cannot be read.
PanopticAnnotation LoadAnnotation(const DatasetManifest& manifest,
                                  const std::filesystem::path& png_root,
                                  std::string_view image_id);

struct EncodedAnnotation {
  ImageEntry image;
  AnnotationEntry entry;
  std::vector<std::uint8_t> png;
};

// The annotation's segment ids become the PNG ids; bboxes are recomputed.
EncodedAnnotation EncodeAnnotation(const PanopticAnnotation& annotation,
                                   const std::string& file_name);

// Writes json_path plus one PNG per annotation under DefaultPngRoot-style
// sibling directory (json_path without extension).
void WriteDataset(const std::filesystem::path& json_path,
                  const std::map<ClassId, Category>& categories,
                  std::span<const PanopticAnnotation> annotations);

// Mask-pair ingestion: maps raw class-plane values to category ids.
struct CategoryMapping {
  std::map<ClassId, Category> categories;
  std::map<std::uint32_t, ClassId> class_value_to_category;
  // When set, class value 0 becomes one segment of this category instead of
  // void.
  std::optional<ClassId> background_category;
};

// {"categories": [{"id", "name", "isthing", "class_value"?}],
//  "background_category"?: id}. class_value defaults to id.
CategoryMapping ParseCategoryMapping(std::string_view json_text);

// Builds an annotation from a class plane and an instance plane. Each
// distinct (class value, instance value != 0) pair becomes one segment; class
// pixels with instance 0 form one segment per class value. Segment ids are
// renumbered 1..n in (category, class value, instance value) order.
// Throws Error(kDimensionMismatch), Error(kUnmappedCategory), and
// Error(kInvariantViolation) for instances on class-0 pixels.
PanopticAnnotation IngestMaskPair(const GrayImage& class_png,
                                  const GrayImage& instance_png,
                                  const CategoryMapping& mapping,
                                  std::string image_id);

}  // namespace pqsuite

#endif  // PQSUITE_PANOPTIC_IO_H_
