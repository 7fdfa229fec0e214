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

#ifndef PQSUITE_PNG_CODEC_H_
#define PQSUITE_PNG_CODEC_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pqsuite {

// 8-bit RGB raster, interleaved, row-major.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  std::size_t Offset(int x, int y) const {
    return 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                static_cast<std::size_t>(x));
  }
  bool operator==(const RgbImage&) const = default;
};

// Single-channel raster of 8- or 16-bit samples.
struct GrayImage {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> values;

  bool operator==(const GrayImage&) const = default;
};

// Throws Error(kCodecError) on malformed data and Error(kChannelError) when
// the file is not 8-bit RGB.
RgbImage DecodeRgbPng(std::span<const std::uint8_t> bytes);

// Compression settings are fixed, so equal rasters give equal bytes.
std::vector<std::uint8_t> EncodeRgbPng(const RgbImage& image);

// Accepts 1/2/4/8/16-bit grayscale; sub-byte depths are widened to 8.
GrayImage DecodeGrayPng(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodeGrayPng(const GrayImage& image);

// Throws Error(kMissingFile).
std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);

}  // namespace pqsuite

#endif  // PQSUITE_PNG_CODEC_H_
