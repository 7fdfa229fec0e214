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

#include "pqsuite/png_codec.h"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "pqsuite/error.h"

namespace pqsuite {
namespace {

constexpr int kCompressionLevel = 6;

struct MemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void ReadFromMemory(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (reader->size - reader->pos < count) {
    png_error(png, "unexpected end of data");
  }
  std::memcpy(out, reader->data + reader->pos, count);
  reader->pos += count;
}

void WriteToVector(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void FlushNoop(png_structp) {}

void SilentWarning(png_structp, png_const_charp) {}

// Error message captured by the libpng error callback before it longjmps.
struct ErrorSink {
  char message[256];
};

void RecordError(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::strncpy(sink->message, msg, sizeof(sink->message) - 1);
  sink->message[sizeof(sink->message) - 1] = '\0';
  png_longjmp(png, 1);
}

enum class Want { kRgb8, kGray };

struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> pixels;  // raw rows, big-endian for 16-bit
};

// Decodes into `out`. Returns false with `sink` filled on libpng failure,
// or sets `*channel_error` when the color layout is not the wanted one.
// No object with a destructor is created after setjmp.
bool DecodeRaw(std::span<const std::uint8_t> bytes, Want want, Decoded* out,
               std::vector<png_bytep>* rows, ErrorSink* sink,
               bool* channel_error) {
  MemoryReader reader{bytes.data(), bytes.size(), 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, sink,
                                           RecordError, SilentWarning);
  if (png == nullptr) {
    std::strcpy(sink->message, "png_create_read_struct failed");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::strcpy(sink->message, "png_create_info_struct failed");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &reader, ReadFromMemory);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  int bit_depth = png_get_bit_depth(png, info);

  if (want == Want::kRgb8) {
    if (color_type != PNG_COLOR_TYPE_RGB || bit_depth != 8) {
      *channel_error = true;
      png_destroy_read_struct(&png, &info, nullptr);
      return false;
    }
  } else {
    if (color_type != PNG_COLOR_TYPE_GRAY) {
      *channel_error = true;
      png_destroy_read_struct(&png, &info, nullptr);
      return false;
    }
    if (bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
      bit_depth = 8;
    }
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out->width = static_cast<int>(width);
  out->height = static_cast<int>(height);
  out->channels = want == Want::kRgb8 ? 3 : 1;
  out->bit_depth = bit_depth;
  out->pixels.resize(rowbytes * height);
  rows->resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    (*rows)[y] = out->pixels.data() + y * rowbytes;
  }
  png_read_image(png, rows->data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

Decoded Decode(std::span<const std::uint8_t> bytes, Want want) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorCode::kCodecError, "not a PNG stream");
  }
  Decoded decoded;
  std::vector<png_bytep> rows;
  ErrorSink sink{};
  bool channel_error = false;
  if (!DecodeRaw(bytes, want, &decoded, &rows, &sink, &channel_error)) {
    if (channel_error) {
      throw Error(ErrorCode::kChannelError,
                  want == Want::kRgb8 ? "expected 8-bit RGB PNG"
                                      : "expected single-channel PNG");
    }
    throw Error(ErrorCode::kCodecError, sink.message);
  }
  return decoded;
}

bool EncodeRaw(int width, int height, int color_type, int bit_depth,
               const std::vector<png_bytep>& rows,
               std::vector<std::uint8_t>* out, ErrorSink* sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, sink,
                                            RecordError, SilentWarning);
  if (png == nullptr) {
    std::strcpy(sink->message, "png_create_write_struct failed");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    std::strcpy(sink->message, "png_create_info_struct failed");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, out, WriteToVector, FlushNoop);
  png_set_compression_level(png, kCompressionLevel);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_BASE,
               PNG_FILTER_TYPE_BASE);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

std::vector<std::uint8_t> Encode(int width, int height, int color_type,
                                 int bit_depth,
                                 std::vector<std::uint8_t>& pixels,
                                 std::size_t rowbytes) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kCodecError, "PNG frame must be non-empty");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] =
        pixels.data() + static_cast<std::size_t>(y) * rowbytes;
  }
  std::vector<std::uint8_t> out;
  ErrorSink sink{};
  if (!EncodeRaw(width, height, color_type, bit_depth, rows, &out, &sink)) {
    throw Error(ErrorCode::kCodecError, sink.message);
  }
  return out;
}

}  // namespace

RgbImage DecodeRgbPng(std::span<const std::uint8_t> bytes) {
  Decoded d = Decode(bytes, Want::kRgb8);
  RgbImage image;
  image.width = d.width;
  image.height = d.height;
  image.rgb = std::move(d.pixels);
  return image;
}

std::vector<std::uint8_t> EncodeRgbPng(const RgbImage& image) {
  const std::size_t expected = 3 * static_cast<std::size_t>(image.width) *
                               static_cast<std::size_t>(image.height);
  if (image.rgb.size() != expected) {
    throw Error(ErrorCode::kDimensionMismatch, "RGB buffer size mismatch");
  }
  std::vector<std::uint8_t> pixels = image.rgb;
  return Encode(image.width, image.height, PNG_COLOR_TYPE_RGB, 8, pixels,
                3 * static_cast<std::size_t>(image.width));
}

GrayImage DecodeGrayPng(std::span<const std::uint8_t> bytes) {
  Decoded d = Decode(bytes, Want::kGray);
  GrayImage image;
  image.width = d.width;
  image.height = d.height;
  image.bit_depth = d.bit_depth;
  const std::size_t n = static_cast<std::size_t>(d.width) *
                        static_cast<std::size_t>(d.height);
  image.values.resize(n);
  if (d.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      image.values[i] = static_cast<std::uint16_t>(
          (d.pixels[2 * i] << 8) | d.pixels[2 * i + 1]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) image.values[i] = d.pixels[i];
  }
  return image;
}

std::vector<std::uint8_t> EncodeGrayPng(const GrayImage& image) {
  if (image.bit_depth != 8 && image.bit_depth != 16) {
    throw Error(ErrorCode::kChannelError, "gray PNG depth must be 8 or 16");
  }
  const std::size_t n = static_cast<std::size_t>(image.width) *
                        static_cast<std::size_t>(image.height);
  if (image.values.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "gray buffer size mismatch");
  }
  const std::size_t bytes_per_sample = image.bit_depth / 8;
  std::vector<std::uint8_t> pixels(n * bytes_per_sample);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t v = image.values[i];
    if (bytes_per_sample == 2) {
      pixels[2 * i] = static_cast<std::uint8_t>(v >> 8);
      pixels[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
    } else {
      if (v > 0xff) {
        throw Error(ErrorCode::kChannelError,
                    "value " + std::to_string(v) + " exceeds 8-bit depth");
      }
      pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return Encode(image.width, image.height, PNG_COLOR_TYPE_GRAY,
                image.bit_depth, pixels,
                bytes_per_sample * static_cast<std::size_t>(image.width));
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace pqsuite
