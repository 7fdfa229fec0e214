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

#include "pqsuite/boundary.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqsuite/distance_transform.h"
#include "pqsuite/error.h"

namespace pqsuite {
namespace {

// A rectangular sub-grid with its own row-major bit planes.
struct Window {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> gt;
  std::vector<std::uint8_t> pred;
};

Window Extract(const LabelMap& gt, SegmentId gt_id, const LabelMap& pred,
               SegmentId pred_id, const Box& box) {
  Window w;
  w.width = box.width();
  w.height = box.height();
  const std::size_t n =
      static_cast<std::size_t>(w.width) * static_cast<std::size_t>(w.height);
  w.gt.assign(n, 0);
  w.pred.assign(n, 0);
  for (int y = box.y0; y < box.y1; ++y) {
    for (int x = box.x0; x < box.x1; ++x) {
      const std::size_t i =
          static_cast<std::size_t>(y - box.y0) * w.width + (x - box.x0);
      w.gt[i] = gt.instance_at(x, y) == gt_id ? 1 : 0;
      w.pred[i] = pred.instance_at(x, y) == pred_id ? 1 : 0;
    }
  }
  return w;
}

// Inner band of a mask. Everything beyond the grid edge is exterior.
std::vector<std::uint8_t> InnerBand(const std::vector<std::uint8_t>& mask,
                                    int width, int height, int radius_px) {
  const int pw = width + 2;
  const int ph = height + 2;
  std::vector<std::uint8_t> exterior(static_cast<std::size_t>(pw) * ph, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      exterior[static_cast<std::size_t>(y + 1) * pw + (x + 1)] =
          mask[static_cast<std::size_t>(y) * width + x] ? 0 : 1;
    }
  }
  const auto dist = SquaredEdt(exterior, pw, ph);
  std::vector<std::uint8_t> band(mask.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      if (!mask[i]) continue;
      band[i] = WithinBand(dist[static_cast<std::size_t>(y + 1) * pw + (x + 1)],
                           radius_px)
                    ? 1
                    : 0;
    }
  }
  return band;
}

std::vector<double> ProximityWeights(const std::vector<std::uint8_t>& gt,
                                     int width, int height, double a,
                                     int radius_px) {
  const auto inner = InnerBand(gt, width, height, radius_px);
  const auto to_gt = SquaredEdt(gt, width, height);
  std::vector<double> weights(gt.size(), 1.0);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const bool near = gt[i] ? inner[i] != 0 : WithinBand(to_gt[i], radius_px);
    if (near) weights[i] = a;
  }
  return weights;
}

double BandIou(const std::vector<std::uint8_t>& gt,
               const std::vector<std::uint8_t>& pred, int width, int height,
               int radius_px) {
  const auto g = InnerBand(gt, width, height, radius_px);
  const auto p = InnerBand(pred, width, height, radius_px);
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    inter += (g[i] && p[i]) ? 1 : 0;
    uni += (g[i] || p[i]) ? 1 : 0;
  }
  if (uni == 0) throw Error(ErrorCode::kEmptyMask, "empty boundary bands");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double WeightedRatio(const std::vector<std::uint8_t>& gt,
                     const std::vector<std::uint8_t>& pred,
                     const std::vector<double>& weights) {
  double inter = 0.0;
  double uni = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] && pred[i]) inter += weights[i];
    if (gt[i] || pred[i]) uni += weights[i];
  }
  if (uni == 0.0) throw Error(ErrorCode::kEmptyMask, "empty union");
  return inter / uni;
}

void CheckRadius(int radius_px) {
  if (radius_px < 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "band radius must be >= 1, got " + std::to_string(radius_px));
  }
}

void CheckSameFrame(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::kDimensionMismatch, "mask frames differ");
  }
}

Box UnionBox(const Box& a, const Box& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

}  // namespace

BinaryMask BinaryMask::Zeros(int width, int height) {
  BinaryMask m;
  m.width = width;
  m.height = height;
  m.bits.assign(static_cast<std::size_t>(width) * height, 0);
  return m;
}

BinaryMask BinaryMask::FromSegment(const LabelMap& map, SegmentId id) {
  BinaryMask m = Zeros(map.width(), map.height());
  const auto inst = map.instance_plane();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    m.bits[i] = (id != kNoInstance && inst[i] == id) ? 1 : 0;
  }
  return m;
}

std::int64_t BinaryMask::Count() const {
  return std::count_if(bits.begin(), bits.end(),
                       [](std::uint8_t b) { return b != 0; });
}

bool WithinBand(std::int64_t squared_distance, int radius_px) {
  const std::int64_t span = 2 * static_cast<std::int64_t>(radius_px) + 1;
  return squared_distance < kNoFeature && 4 * squared_distance < span * span;
}

int BandRadius(double d, int width, int height) {
  if (!(d > 0.0) || d > 1.0) {
    throw Error(ErrorCode::kInvalidParameter,
                "contour fraction must lie in (0, 1], got " +
                    std::to_string(d));
  }
  const double diagonal = std::hypot(static_cast<double>(width),
                                     static_cast<double>(height));
  return std::max(1, static_cast<int>(std::lround(d * diagonal)));
}

BoundaryBand MakeBoundaryBand(const BinaryMask& mask, int radius_px,
                              SegmentId source) {
  CheckRadius(radius_px);
  BoundaryBand band;
  band.radius_px = radius_px;
  band.source = source;
  band.mask.width = mask.width;
  band.mask.height = mask.height;
  band.mask.bits = InnerBand(mask.bits, mask.width, mask.height, radius_px);
  return band;
}

double BoundaryIou(const BinaryMask& gt, const BinaryMask& pred,
                   int radius_px) {
  CheckSameFrame(gt, pred);
  CheckRadius(radius_px);
  if (gt.Count() == 0 || pred.Count() == 0) {
    throw Error(ErrorCode::kEmptyMask, "boundary IoU of an empty mask");
  }
  return BandIou(gt.bits, pred.bits, gt.width, gt.height, radius_px);
}

WeightMap MakeWeightMap(const BinaryMask& gt, double a, int radius_px) {
  if (!(a >= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                "boundary factor must be >= 1, got " + std::to_string(a));
  }
  CheckRadius(radius_px);
  WeightMap w;
  w.width = gt.width;
  w.height = gt.height;
  w.boundary_factor = a;
  w.band_radius_px = radius_px;
  w.weights = ProximityWeights(gt.bits, gt.width, gt.height, a, radius_px);
  return w;
}

double WeightedIou(const BinaryMask& gt, const BinaryMask& pred,
                   const WeightMap& weights) {
  CheckSameFrame(gt, pred);
  if (weights.width != gt.width || weights.height != gt.height) {
    throw Error(ErrorCode::kDimensionMismatch, "weight map frame differs");
  }
  return WeightedRatio(gt.bits, pred.bits, weights.weights);
}

double SegmentBoundaryIou(const LabelMap& gt, SegmentId gt_id,
                          const Box& gt_box, const LabelMap& pred,
                          SegmentId pred_id, const Box& pred_box,
                          int radius_px) {
  CheckRadius(radius_px);
  if (gt_box.empty() || pred_box.empty()) {
    throw Error(ErrorCode::kEmptyMask, "boundary IoU of an empty segment");
  }
  const Box box = UnionBox(gt_box, pred_box);
  const Window w = Extract(gt, gt_id, pred, pred_id, box);
  return BandIou(w.gt, w.pred, w.width, w.height, radius_px);
}

double SegmentWeightedIou(const LabelMap& gt, SegmentId gt_id,
                          const Box& gt_box, const LabelMap& pred,
                          SegmentId pred_id, const Box& pred_box, double a,
                          int radius_px) {
  CheckRadius(radius_px);
  if (!(a >= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "boundary factor must be >= 1");
  }
  if (gt_box.empty() || pred_box.empty()) {
    throw Error(ErrorCode::kEmptyMask, "weighted IoU of an empty segment");
  }
  const Box box = UnionBox(gt_box, pred_box);
  const Window w = Extract(gt, gt_id, pred, pred_id, box);
  const auto weights = ProximityWeights(w.gt, w.width, w.height, a, radius_px);
  return WeightedRatio(w.gt, w.pred, weights);
}

}  // namespace pqsuite
