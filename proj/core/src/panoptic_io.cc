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

#include "pqsuite/panoptic_io.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

#include "pqsuite/error.h"

namespace pqsuite {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string IdToString(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw Error(ErrorCode::kParseError, "image_id must be a string or integer");
}

bool IsCanonicalInteger(const std::string& s) {
  if (s.empty() || s.size() > 18) return false;
  if (s.size() > 1 && s[0] == '0') return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

ordered_json IdToJson(const std::string& id) {
  if (IsCanonicalInteger(id)) return std::stoll(id);
  return id;
}

bool ReadFlag(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_boolean()) return v.get<bool>();
  return v.get<long long>() != 0;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

IdMap IdMapFromRgb(const RgbImage& image) {
  IdMap map;
  map.width = image.width;
  map.height = image.height;
  const std::size_t n = static_cast<std::size_t>(image.width) *
                        static_cast<std::size_t>(image.height);
  map.ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t r = image.rgb[3 * i];
    const std::uint32_t g = image.rgb[3 * i + 1];
    const std::uint32_t b = image.rgb[3 * i + 2];
    map.ids[i] = r + 256u * g + 65536u * b;
  }
  return map;
}

RgbImage RgbFromIdMap(const IdMap& map) {
  RgbImage image;
  image.width = map.width;
  image.height = map.height;
  image.rgb.resize(3 * map.ids.size());
  for (std::size_t i = 0; i < map.ids.size(); ++i) {
    const std::uint32_t id = map.ids[i];
    if (id >= kPanopticIdLimit) {
      throw Error(ErrorCode::kIdOverflow,
                  "id " + std::to_string(id) + " does not fit in 24 bits");
    }
    image.rgb[3 * i] = static_cast<std::uint8_t>(id & 0xff);
    image.rgb[3 * i + 1] = static_cast<std::uint8_t>((id >> 8) & 0xff);
    image.rgb[3 * i + 2] = static_cast<std::uint8_t>((id >> 16) & 0xff);
  }
  return image;
}

IdMap DecodePanopticPng(std::span<const std::uint8_t> bytes) {
  return IdMapFromRgb(DecodeRgbPng(bytes));
}

std::vector<std::uint8_t> EncodePanopticPng(const IdMap& map) {
  return EncodeRgbPng(RgbFromIdMap(map));
}

const ImageEntry* DatasetManifest::FindImage(std::string_view image_id) const {
  for (const ImageEntry& image : images) {
    if (image.image_id == image_id) return &image;
  }
  return nullptr;
}

const AnnotationEntry* DatasetManifest::FindAnnotation(
    std::string_view image_id) const {
  for (const AnnotationEntry& ann : annotations) {
    if (ann.image_id == image_id) return &ann;
  }
  return nullptr;
}

DatasetManifest ParseManifest(std::string_view json_text) {
  DatasetManifest manifest;
  try {
    const json root = json::parse(json_text);
    if (root.contains("categories")) {
      for (const json& c : root.at("categories")) {
        Category cat;
        cat.id = c.at("id").get<ClassId>();
        cat.name = c.value("name", std::string());
        cat.isthing = ReadFlag(c, "isthing", true);
        cat.supercategory = c.value("supercategory", std::string());
        manifest.categories[cat.id] = cat;
      }
    }
    if (root.contains("images")) {
      for (const json& im : root.at("images")) {
        ImageEntry image;
        image.image_id = IdToString(im.at("id"));
        image.width = im.value("width", 0);
        image.height = im.value("height", 0);
        image.file_name = im.value("file_name", std::string());
        manifest.images.push_back(std::move(image));
      }
    }
    if (root.contains("annotations")) {
      for (const json& a : root.at("annotations")) {
        AnnotationEntry entry;
        entry.image_id = IdToString(a.at("image_id"));
        entry.file_name = a.value("file_name", std::string());
        for (const json& s : a.value("segments_info", json::array())) {
          SegmentInfo info;
          info.id = s.at("id").get<SegmentId>();
          info.category_id = s.at("category_id").get<ClassId>();
          info.area = s.value("area", std::int64_t{0});
          if (s.contains("bbox")) {
            const json& b = s.at("bbox");
            for (std::size_t k = 0; k < 4 && k < b.size(); ++k) {
              info.bbox[k] = b.at(k).get<int>();
            }
          }
          info.iscrowd = ReadFlag(s, "iscrowd", false);
          entry.segments_info.push_back(info);
        }
        manifest.annotations.push_back(std::move(entry));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return manifest;
}

std::string SerializeManifest(const DatasetManifest& manifest) {
  ordered_json root;
  ordered_json images = ordered_json::array();
  for (const ImageEntry& image : manifest.images) {
    ordered_json im;
    im["id"] = IdToJson(image.image_id);
    im["width"] = image.width;
    im["height"] = image.height;
    im["file_name"] = image.file_name;
    images.push_back(std::move(im));
  }
  ordered_json annotations = ordered_json::array();
  for (const AnnotationEntry& entry : manifest.annotations) {
    ordered_json a;
    a["image_id"] = IdToJson(entry.image_id);
    a["file_name"] = entry.file_name;
    ordered_json segments = ordered_json::array();
    for (const SegmentInfo& info : entry.segments_info) {
      ordered_json s;
      s["id"] = info.id;
      s["category_id"] = info.category_id;
      s["area"] = info.area;
      s["bbox"] = info.bbox;
      s["iscrowd"] = info.iscrowd ? 1 : 0;
      segments.push_back(std::move(s));
    }
    a["segments_info"] = std::move(segments);
    annotations.push_back(std::move(a));
  }
  ordered_json categories = ordered_json::array();
  for (const auto& [id, cat] : manifest.categories) {
    ordered_json c;
    c["id"] = cat.id;
    c["name"] = cat.name;
    c["supercategory"] = cat.supercategory;
    c["isthing"] = cat.isthing ? 1 : 0;
    categories.push_back(std::move(c));
  }
  root["images"] = std::move(images);
  root["annotations"] = std::move(annotations);
  root["categories"] = std::move(categories);
  return root.dump(2) + "\n";
}

std::vector<std::string> CheckManifest(const DatasetManifest& manifest) {
  std::vector<std::string> problems;
  std::set<std::string> image_ids;
  for (const ImageEntry& image : manifest.images) {
    if (!image_ids.insert(image.image_id).second) {
      problems.push_back("duplicate image id " + image.image_id);
    }
  }
  for (const AnnotationEntry& entry : manifest.annotations) {
    if (!image_ids.contains(entry.image_id)) {
      problems.push_back("annotation references unlisted image " +
                         entry.image_id);
    }
    for (const SegmentInfo& info : entry.segments_info) {
      if (!manifest.categories.contains(info.category_id)) {
        problems.push_back("image " + entry.image_id + " segment " +
                           std::to_string(info.id) + " uses unknown category " +
                           std::to_string(info.category_id));
      }
    }
  }
  return problems;
}

std::filesystem::path DefaultPngRoot(const std::filesystem::path& json_path) {
  std::filesystem::path sibling = json_path;
  sibling.replace_extension();
  if (std::filesystem::is_directory(sibling)) return sibling;
  return json_path.parent_path();
}

Dataset ReadDataset(const std::filesystem::path& json_path,
                    const std::optional<std::filesystem::path>& png_root) {
  Dataset dataset;
  dataset.manifest = ParseManifest(ReadTextFile(json_path));
  dataset.png_root = png_root ? *png_root : DefaultPngRoot(json_path);
  return dataset;
}

PanopticAnnotation AnnotationFromIdMap(
    const IdMap& map, const AnnotationEntry& entry,
    const std::map<ClassId, Category>& categories) {
  std::map<SegmentId, const SegmentInfo*> by_id;
  for (const SegmentInfo& info : entry.segments_info) {
    if (!categories.contains(info.category_id)) {
      throw Error(ErrorCode::kCategoryMissing,
                  "image " + entry.image_id + " segment " +
                      std::to_string(info.id) + " category " +
                      std::to_string(info.category_id));
    }
    by_id.emplace(info.id, &info);
  }

  std::vector<std::uint32_t> class_plane(map.ids.size(), kVoidClass);
  std::vector<std::uint32_t> instance_plane(map.ids.size(), kNoInstance);
  for (std::size_t i = 0; i < map.ids.size(); ++i) {
    const std::uint32_t id = map.ids[i];
    if (id == 0) continue;
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kUnknownSegmentId,
                  "image " + entry.image_id + " pixel id " +
                      std::to_string(id) + " has no segments_info row");
    }
    class_plane[i] = it->second->category_id;
    instance_plane[i] = id;
  }

  PanopticAnnotation ann;
  ann.image_id = entry.image_id;
  ann.label_map =
      LabelMap::Build(class_plane, instance_plane, map.width, map.height);
  for (const SegmentInfo& info : entry.segments_info) {
    ann.segments.push_back(
        {info.id, info.category_id, info.area, info.iscrowd});
  }
  std::sort(ann.segments.begin(), ann.segments.end(),
            [](const SegmentRecord& a, const SegmentRecord& b) {
              return std::pair(a.class_id, a.segment_id) <
                     std::pair(b.class_id, b.segment_id);
            });
  return ann;
}

PanopticAnnotation LoadAnnotation(const DatasetManifest& manifest,
                                  const std::filesystem::path& png_root,
                                  std::string_view image_id) {
  const AnnotationEntry* entry = manifest.FindAnnotation(image_id);
  if (entry == nullptr) {
    throw Error(ErrorCode::kMissingImage,
                "no annotation for image " + std::string(image_id));
  }
  const IdMap map =
      DecodePanopticPng(ReadFileBytes(png_root / entry->file_name));
  if (const ImageEntry* image = manifest.FindImage(image_id);
      image != nullptr && image->width > 0 && image->height > 0 &&
      (image->width != map.width || image->height != map.height)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "image " + std::string(image_id) + " PNG is " +
                    std::to_string(map.width) + "x" +
                    std::to_string(map.height) + ", manifest says " +
                    std::to_string(image->width) + "x" +
                    std::to_string(image->height));
  }
  return AnnotationFromIdMap(map, *entry, manifest.categories);
}

EncodedAnnotation EncodeAnnotation(const PanopticAnnotation& annotation,
                                   const std::string& file_name) {
  const LabelMap& lm = annotation.label_map;
  IdMap map;
  map.width = lm.width();
  map.height = lm.height();
  const auto instances = lm.instance_plane();
  map.ids.assign(instances.begin(), instances.end());

  EncodedAnnotation out;
  out.png = EncodePanopticPng(map);
  out.image = {annotation.image_id, lm.width(), lm.height(), file_name};
  out.entry.image_id = annotation.image_id;
  out.entry.file_name = file_name;
  const auto boxes = SegmentBoxes(lm);
  for (const SegmentRecord& rec : annotation.segments) {
    SegmentInfo info;
    info.id = rec.segment_id;
    info.category_id = rec.class_id;
    info.area = rec.area;
    info.iscrowd = rec.ignore;
    if (auto it = boxes.find(rec.segment_id); it != boxes.end()) {
      const Box& b = it->second;
      info.bbox = {b.x0, b.y0, b.width(), b.height()};
    }
    out.entry.segments_info.push_back(info);
  }
  return out;
}

void WriteDataset(const std::filesystem::path& json_path,
                  const std::map<ClassId, Category>& categories,
                  std::span<const PanopticAnnotation> annotations) {
  std::filesystem::path png_dir = json_path;
  png_dir.replace_extension();
  std::filesystem::create_directories(png_dir);

  DatasetManifest manifest;
  manifest.categories = categories;
  for (const PanopticAnnotation& ann : annotations) {
    EncodedAnnotation enc = EncodeAnnotation(ann, ann.image_id + ".png");
    WriteFileBytes(png_dir / enc.entry.file_name, enc.png);
    manifest.images.push_back(std::move(enc.image));
    manifest.annotations.push_back(std::move(enc.entry));
  }
  const std::string text = SerializeManifest(manifest);
  std::ofstream out(json_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kMissingFile, json_path.string());
  out << text;
}

CategoryMapping ParseCategoryMapping(std::string_view json_text) {
  CategoryMapping mapping;
  try {
    const json root = json::parse(json_text);
    const json& cats = root.is_array() ? root : root.at("categories");
    for (const json& c : cats) {
      Category cat;
      cat.id = c.at("id").get<ClassId>();
      cat.name = c.value("name", std::string());
      cat.isthing = ReadFlag(c, "isthing", true);
      cat.supercategory = c.value("supercategory", std::string());
      const std::uint32_t value = c.value("class_value", cat.id);
      mapping.categories[cat.id] = cat;
      mapping.class_value_to_category[value] = cat.id;
    }
    if (root.is_object() && root.contains("background_category")) {
      mapping.background_category =
          root.at("background_category").get<ClassId>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (mapping.background_category &&
      !mapping.categories.contains(*mapping.background_category)) {
    throw Error(ErrorCode::kCategoryMissing,
                "background_category " +
                    std::to_string(*mapping.background_category) +
                    " is not declared");
  }
  return mapping;
}

PanopticAnnotation IngestMaskPair(const GrayImage& class_png,
                                  const GrayImage& instance_png,
                                  const CategoryMapping& mapping,
                                  std::string image_id) {
  if (class_png.width != instance_png.width ||
      class_png.height != instance_png.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "class plane " + std::to_string(class_png.width) + "x" +
                    std::to_string(class_png.height) + " vs instance plane " +
                    std::to_string(instance_png.width) + "x" +
                    std::to_string(instance_png.height));
  }
  const std::size_t n = class_png.values.size();

  // Source segment key: (category, class value, instance value).
  using Key = std::tuple<ClassId, std::uint32_t, std::uint32_t>;
  std::vector<Key> keys(n);
  std::set<Key> distinct;
  std::vector<bool> labeled(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t value = class_png.values[i];
    const std::uint32_t inst = instance_png.values[i];
    ClassId category = kVoidClass;
    if (value == 0) {
      if (inst != 0) {
        throw Error(ErrorCode::kInvariantViolation,
                    "instance " + std::to_string(inst) +
                        " on class-0 pixel " + std::to_string(i));
      }
      if (!mapping.background_category) continue;
      category = *mapping.background_category;
    } else {
      auto it = mapping.class_value_to_category.find(value);
      if (it == mapping.class_value_to_category.end()) {
        throw Error(ErrorCode::kUnmappedCategory,
                    "class value " + std::to_string(value) +
                        " has no category mapping");
      }
      category = it->second;
    }
    keys[i] = Key{category, value, inst};
    labeled[i] = true;
    distinct.insert(keys[i]);
  }

  std::map<Key, SegmentId> renumber;
  SegmentId next = 1;
  for (const Key& key : distinct) renumber[key] = next++;

  std::vector<std::uint32_t> class_plane(n, kVoidClass);
  std::vector<std::uint32_t> instance_plane(n, kNoInstance);
  for (std::size_t i = 0; i < n; ++i) {
    if (!labeled[i]) continue;
    class_plane[i] = std::get<0>(keys[i]);
    instance_plane[i] = renumber[keys[i]];
  }
  return MakeAnnotation(std::move(image_id),
                        LabelMap::Build(class_plane, instance_plane,
                                        class_png.width, class_png.height));
}

}  // namespace pqsuite
