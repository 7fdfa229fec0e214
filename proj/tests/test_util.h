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

#ifndef PQSUITE_TESTS_TEST_UTIL_H_
#define PQSUITE_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "pqsuite/segmap.h"

namespace pqsuite::testing {

// Axis-aligned rectangle painted with one segment.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  ClassId cls = 1;
  SegmentId id = 1;
};

// Later rectangles overwrite earlier ones.
inline LabelMap Paint(int width, int height, std::initializer_list<Rect> rects) {
  const auto n = static_cast<std::size_t>(width) * height;
  std::vector<std::uint32_t> cls(n, 0);
  std::vector<std::uint32_t> inst(n, 0);
  for (const Rect& r : rects) {
    for (int y = r.y; y < r.y + r.h; ++y) {
      for (int x = r.x; x < r.x + r.w; ++x) {
        cls[static_cast<std::size_t>(y) * width + x] = r.cls;
        inst[static_cast<std::size_t>(y) * width + x] = r.id;
      }
    }
  }
  return LabelMap::Build(cls, inst, width, height);
}

inline PanopticAnnotation PaintAnnotation(const std::string& image_id,
                                          int width, int height,
                                          std::initializer_list<Rect> rects) {
  return MakeAnnotation(image_id, Paint(width, height, rects));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pqsuite-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace pqsuite::testing

#endif  // PQSUITE_TESTS_TEST_UTIL_H_
