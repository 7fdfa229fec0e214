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

#ifndef PQSUITE_BOUNDARY_H_
#define PQSUITE_BOUNDARY_H_

#include <cstdint>
#include <vector>

#include "pqsuite/segmap.h"

namespace pqsuite {

// Full-frame binary mask, row-major.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  static BinaryMask Zeros(int width, int height);
  static BinaryMask FromSegment(const LabelMap& map, SegmentId id);

  bool at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool on) {
    bits[static_cast<std::size_t>(y) * width + x] = on ? 1 : 0;
  }
  std::int64_t Count() const;

  bool operator==(const BinaryMask&) const = default;
};

// Band membership rule shared by inner and outer bands: a pixel belongs when
// its centre lies closer than radius_px to the contour, which runs half a
// pixel inside the nearest pixel of the other side. For a squared
// centre-to-centre distance d2 this is 4*d2 < (2r+1)^2.
bool WithinBand(std::int64_t squared_distance, int radius_px);

// max(1, round(d * diagonal)). Throws Error(kInvalidParameter) unless
// 0 < d <= 1.
int BandRadius(double d, int width, int height);

struct BoundaryBand {
  BinaryMask mask;
  int radius_px = 1;
  SegmentId source = 0;

  bool operator==(const BoundaryBand&) const = default;
};

// Inner band of `mask`. The image border counts as mask exterior.
BoundaryBand MakeBoundaryBand(const BinaryMask& mask, int radius_px,
                              SegmentId source = 0);

// |band(G) & band(P)| / |band(G) | band(P)|. Throws Error(kEmptyMask) if
// either mask is empty, Error(kDimensionMismatch) on differing frames.
double BoundaryIou(const BinaryMask& gt, const BinaryMask& pred,
                   int radius_px);

struct WeightMap {
  int width = 0;
  int height = 0;
  std::vector<double> weights;
  double boundary_factor = 1.0;
  int band_radius_px = 1;

  double at(int x, int y) const {
    return weights[static_cast<std::size_t>(y) * width + x];
  }
};

// Weight a on the gt inner band and on exterior pixels within the same
// contour distance; 1 elsewhere. Throws Error(kInvalidParameter) for a < 1.
WeightMap MakeWeightMap(const BinaryMask& gt, double a, int radius_px);

// Sum of weights over G & P divided by the sum over G | P.
// Throws Error(kEmptyMask) on an empty union.
double WeightedIou(const BinaryMask& gt, const BinaryMask& pred,
                   const WeightMap& weights);

// Windowed forms used by the metric pipeline: operate on the union of the two
// segments' bounding boxes instead of the full frame, with identical results.
double SegmentBoundaryIou(const LabelMap& gt, SegmentId gt_id, const Box& gt_box,
                          const LabelMap& pred, SegmentId pred_id,
                          const Box& pred_box, int radius_px);
double SegmentWeightedIou(const LabelMap& gt, SegmentId gt_id, const Box& gt_box,
                          const LabelMap& pred, SegmentId pred_id,
                          const Box& pred_box, double a, int radius_px);

}  // namespace pqsuite

#endif  // PQSUITE_BOUNDARY_H_
