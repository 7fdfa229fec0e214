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

#ifndef PQSUITE_ORACLE_ORACLE_H_
#define PQSUITE_ORACLE_ORACLE_H_

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pqsuite/boundary.h"
#include "pqsuite/matching.h"
#include "pqsuite/pqmetrics.h"
#include "pqsuite/segmap.h"

// Brute-force reference implementations. Everything here is computed from
// explicit pixel sets with naive loops and shares no logic with the fast
// path beyond the domain types. Test and selftest use only.
namespace pqsuite::oracle {

inline constexpr int kMaxContingencySide = 128;
inline constexpr int kMaxBandSide = 64;

using Pixel = std::pair<int, int>;  // (x, y)

struct PixelSet {
  SegmentId id = 0;
  ClassId class_id = 0;
  bool crowd = false;
  std::set<Pixel> pixels;
};

// One set per segment of the map, crowd flags taken from the table rows.
std::vector<PixelSet> PixelSets(const PanopticAnnotation& annotation);

// Throws Error(kFrameTooLarge) beyond 128x128, Error(kDimensionMismatch).
ContingencyTable OracleContingency(const LabelMap& gt, const LabelMap& pred);

// Inner band by all-pairs distances to the complement and to the ring of
// pixels just outside the frame. Throws Error(kFrameTooLarge) beyond 64x64.
BoundaryBand OracleBand(const BinaryMask& mask, int radius_px);

int OracleBandRadius(double d, int width, int height);
double OracleBoundaryIou(const BinaryMask& gt, const BinaryMask& pred,
                         int radius_px);
double OracleWeightedIou(const BinaryMask& gt, const BinaryMask& pred,
                         double a, int radius_px);

// The full metric family. Images are paired by id; a gt image without a
// prediction is scored against an empty one. Ignores the fault switch in
// `config`. Throws Error(kFrameTooLarge) beyond 64x64.
MetricReport OracleMetrics(std::span<const PanopticAnnotation> gt,
                           std::span<const PanopticAnnotation> pred,
                           const MetricConfig& config);

// Every numeric field of the two reports that differs by more than
// `tolerance`, or whose definedness differs, as readable lines.
std::vector<std::string> CompareReports(const MetricReport& actual,
                                        const MetricReport& expected,
                                        double tolerance);

}  // namespace pqsuite::oracle

#endif  // PQSUITE_ORACLE_ORACLE_H_
