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

#ifndef PQSUITE_PQMETRICS_H_
#define PQSUITE_PQMETRICS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqsuite/matching.h"
#include "pqsuite/panoptic_io.h"
#include "pqsuite/segmap.h"

namespace pqsuite {

// kKirillov divides by tp + fp/2 + fn/2. kEq1Literal divides by
// (tp + fp + fn)/2, the form printed for the i/w/fw family.
enum class Denominator { kKirillov, kEq1Literal };

// kMacroClass averages each class over images, then over classes.
// kMacroImage averages each image over its classes, then over images.
enum class Aggregate { kMacroClass, kMacroImage };

enum class BpqMode { kBoundary, kMin };
enum class FrequencyBasis { kPixels, kInstances };
enum class Metric { kPq, kMpqPlus, kBpq, kIpq, kWpq, kFwpq, kR2 };

// Per-TP quality term a stats accumulator sums.
enum class Quality { kIou, kBoundary, kWeighted };

std::string_view ToString(Denominator v);
std::string_view ToString(Aggregate v);
std::string_view ToString(BpqMode v);
std::string_view ToString(FrequencyBasis v);
std::string_view ToString(Metric v);

// Parse the CLI spellings; throw Error(kInvalidParameter) otherwise.
Denominator ParseDenominator(std::string_view s);  // kirillov | eq1 | eq1-literal
Aggregate ParseAggregate(std::string_view s);      // class | image (or macro-*)
BpqMode ParseBpqMode(std::string_view s);          // boundary | min
FrequencyBasis ParseFrequencyBasis(std::string_view s);  // pixels | instances
Metric ParseMetric(std::string_view s);            // pq, mpq+, bpq, ...
std::vector<Metric> ParseMetricList(std::string_view comma_separated);
std::vector<Metric> AllMetrics();

struct MetricConfig {
  Denominator denominator = Denominator::kKirillov;
  Aggregate aggregate = Aggregate::kMacroClass;
  bool all_aggregates = false;
  double bpq_d = 0.02;
  BpqMode bpq_mode = BpqMode::kBoundary;
  double wpq_a = 10.0;
  double wpq_d = 0.02;
  double match_threshold = 0.5;
  double void_fraction_threshold = 0.5;
  bool subtract_void_from_iou = false;
  FrequencyBasis frequency_basis = FrequencyBasis::kPixels;
  std::vector<Metric> metrics = AllMetrics();
  // Mutation-testing switch, never set in normal runs.
  bool fault_inclusive_threshold = false;

  bool Wants(Metric m) const;
  MatchOptions match_options() const;
  // Throws Error(kInvalidParameter) for out-of-range parameters.
  void Check() const;

  bool operator==(const MetricConfig&) const = default;
};

// Canonical accumulator at any aggregation granularity.
struct PqStats {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double quality_sum = 0.0;

  std::int64_t total() const { return tp + fp + fn; }
  PqStats& operator+=(const PqStats& o);
  bool operator==(const PqStats&) const = default;
};

struct QualityTriple {
  double pq = 0.0;
  double sq = 0.0;
  double rq = 0.0;
};

// nullopt is the Undefined value (tp + fp + fn == 0); callers exclude it from
// averages. SQ is 0 when tp is 0.
std::optional<QualityTriple> QualityRatio(const PqStats& stats,
                                          Denominator convention);

using QualityFn = std::function<double(ClassId, const TpPair&)>;

// Per-class counts of a (void-ruled) match result. Discarded preds are not
// FPs. quality_sum adds quality(tp) over TPs in result order.
std::map<ClassId, PqStats> ComputePqStats(const MatchResult& result,
                                          const QualityFn& quality);
// Same, with plain IoU as the quality term.
std::map<ClassId, PqStats> ComputePqStats(const MatchResult& result);

// One (image, class) cell of a dataset evaluation.
struct ClassCell {
  ClassId class_id = 0;
  PqStats pq;   // quality = IoU
  PqStats bpq;  // quality = boundary IoU (or min with IoU)
  PqStats wpq;  // quality = boundary-weighted IoU
  std::int64_t gt_count = 0;    // tp + fn
  std::int64_t pred_count = 0;  // tp + fp
  std::int64_t gt_pixels = 0;   // pixels of scored gt segments
  std::int64_t discarded = 0;

  const PqStats& stats(Quality q) const;
};

struct ImageEvaluation {
  std::string image_id;
  std::vector<ClassCell> cells;  // sorted by class id
  std::vector<std::string> warnings;

  const ClassCell* Find(ClassId class_id) const;
};

// Contingency, matching, void rule and every per-TP quality term for one
// image. An empty `pred` frame means "no prediction".
ImageEvaluation EvaluateImage(const PanopticAnnotation& gt,
                              const PanopticAnnotation& pred,
                              const MetricConfig& config);

// Dataset-level metrics over evaluations in canonical (image id) order.
// All throw Error(kEmptyDataset) for an empty span; nullopt means every
// contributing cell was Undefined.
std::optional<double> VanillaPq(std::span<const ImageEvaluation> images,
                                Denominator convention, Aggregate aggregate,
                                Quality quality = Quality::kIou);
std::optional<double> MpqPlus(std::span<const ImageEvaluation> images,
                              Denominator convention);
// Throws Error(kEmptyDataset) when no image has a gt segment.
double Ipq(std::span<const ImageEvaluation> images, Denominator convention);
// Throws Error(kEmptyDataset) when the class weights sum to zero.
double Fwpq(std::span<const ImageEvaluation> images, Denominator convention,
            FrequencyBasis basis);

struct CountPair {
  double truth = 0.0;
  double predicted = 0.0;
};
// 1 - sum (pred - truth)^2 / sum (truth - mean)^2; nullopt when the truth
// counts have zero variance.
std::optional<double> RSquared(std::span<const CountPair> pairs);
// Over every image x observed class cell, truth = tp + fn,
// predicted = tp + fp.
std::optional<double> RSquared(std::span<const ImageEvaluation> images);

// Per-image iPQ score: mean PQ over classes present in that image's gt.
std::optional<double> ImageIpqScore(const ImageEvaluation& image,
                                    Denominator convention);

struct ClassReport {
  ClassId class_id = 0;
  std::string name;
  PqStats stats;  // pooled over the dataset, quality = IoU
  std::optional<double> pq;
  std::optional<double> sq;
  std::optional<double> rq;
  std::optional<double> bpq;
  std::optional<double> wpq;
  std::optional<double> pq_image_mean;  // mean of defined per-image cells
  std::int64_t gt_pixels = 0;
  std::int64_t gt_instances = 0;
  std::int64_t pred_instances = 0;
};

struct ImageReport {
  std::string image_id;
  std::optional<double> pq;
  std::optional<double> ipq_score;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t discarded = 0;
  std::int64_t nulled_fp = 0;  // FPs of classes absent from this image's gt
};

struct AggregateValues {
  std::optional<double> pq;
  std::optional<double> mpq_plus;
  std::optional<double> bpq;
  std::optional<double> ipq;
  std::optional<double> wpq;
  std::optional<double> fwpq;
  std::optional<double> r2;
};

struct ConventionValues {
  std::optional<double> pq;
  std::optional<double> bpq;
  std::optional<double> wpq;
};

struct CountSummary {
  std::int64_t images = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t discarded = 0;
  std::int64_t nulled_fp = 0;
};

struct MetricReport {
  MetricConfig config;
  std::vector<ClassReport> per_class;
  std::vector<ImageReport> per_image;
  AggregateValues aggregate;
  std::optional<ConventionValues> macro_class;
  std::optional<ConventionValues> macro_image;
  CountSummary counts;
  std::vector<std::string> observations;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;  // images that could not be evaluated
  std::optional<std::string> timestamp;
};

// Aggregates per-image evaluations (sorted by image id) into a report.
MetricReport BuildReport(std::span<const ImageEvaluation> images,
                         const MetricConfig& config,
                         const std::map<ClassId, Category>& categories = {});

}  // namespace pqsuite

#endif  // PQSUITE_PQMETRICS_H_
