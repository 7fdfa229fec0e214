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

#ifndef PQSUITE_MATCHING_H_
#define PQSUITE_MATCHING_H_

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pqsuite/segmap.h"

namespace pqsuite {

// Joint histogram of (gt segment, pred segment) co-occurrence over one frame.
// Segment id 0 stands for void on either side.
struct ContingencyTable {
  int width = 0;
  int height = 0;
  std::map<std::pair<SegmentId, SegmentId>, std::int64_t> intersections;
  std::map<SegmentId, std::int64_t> gt_area;
  std::map<SegmentId, std::int64_t> pred_area;
  // Pred pixels lying on gt void.
  std::map<SegmentId, std::int64_t> pred_void_overlap;
  // Gt pixels with no prediction.
  std::map<SegmentId, std::int64_t> gt_unpredicted;
  std::int64_t void_both = 0;

  std::int64_t Intersection(SegmentId gt, SegmentId pred) const;
  std::int64_t VoidOverlap(SegmentId pred) const;

  bool operator==(const ContingencyTable&) const = default;
};

// Single pass over the pixels. Throws Error(kDimensionMismatch).
ContingencyTable Contingency(const LabelMap& gt, const LabelMap& pred);

// intersection / (gt_area + pred_area - intersection).
// Throws Error(kInvalidCounts) unless 0 <= intersection <= min(areas) and
// both areas are positive.
double Iou(std::int64_t intersection, std::int64_t gt_area,
           std::int64_t pred_area);

struct MatchOptions {
  double threshold = 0.5;
  // Remove a prediction's void pixels from the union before computing IoU.
  bool subtract_void = false;
  // Mutation-testing switch: match on IoU >= threshold instead of >.
  bool inclusive_threshold = false;
};

struct TpPair {
  SegmentId gt = 0;
  SegmentId pred = 0;
  double iou = 0.0;

  bool operator==(const TpPair&) const = default;
};

struct ClassMatch {
  ClassId class_id = 0;
  std::vector<TpPair> tp;            // sorted by gt id
  std::vector<SegmentId> fp;         // sorted
  std::vector<SegmentId> fn;         // sorted
  std::vector<SegmentId> discarded;  // FPs removed by the void rule
  std::vector<SegmentId> ignored_gt; // crowd segments, never scored

  bool operator==(const ClassMatch&) const = default;
};

struct MatchResult {
  std::vector<ClassMatch> classes;  // sorted by class id

  const ClassMatch* Find(ClassId class_id) const;
  bool operator==(const MatchResult&) const = default;
};

// Class-aware unique matching. A pair is a TP iff it shares a class and
// IoU > threshold. At threshold >= 0.5 a segment can exceed the threshold
// with at most one partner; below that, candidates are taken greedily by
// higher IoU, then lower pred id, then lower gt id.
MatchResult MatchSegments(const ContingencyTable& table,
                          std::span<const SegmentRecord> gt_segments,
                          std::span<const SegmentRecord> pred_segments,
                          const MatchOptions& options = {});

// Moves every FP whose share of pixels on gt void (or on same-class crowd
// segments) exceeds void_fraction_threshold into `discarded`.
MatchResult ApplyVoidRule(MatchResult result, const ContingencyTable& table,
                          double void_fraction_threshold = 0.5);

}  // namespace pqsuite

#endif  // PQSUITE_MATCHING_H_
