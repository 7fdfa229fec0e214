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

#include "pqsuite/pqmetrics.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "pqsuite/boundary.h"
#include "pqsuite/error.h"

namespace pqsuite {
namespace {

std::optional<double> CellPq(const PqStats& s, Denominator convention) {
  const auto q = QualityRatio(s, convention);
  if (!q) return std::nullopt;
  return q->pq;
}

std::optional<double> Mean(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void RequireImages(std::span<const ImageEvaluation> images) {
  if (images.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no images to aggregate");
  }
}

// Dataset-pooled stats per class, accumulated in (image, class) order.
std::map<ClassId, PqStats> PoolByClass(std::span<const ImageEvaluation> images,
                                       Quality quality) {
  std::map<ClassId, PqStats> pooled;
  for (const ImageEvaluation& image : images) {
    for (const ClassCell& cell : image.cells) {
      pooled[cell.class_id] += cell.stats(quality);
    }
  }
  return pooled;
}

std::string FormatValue(const std::optional<double>& v) {
  if (!v) return "null";
  std::ostringstream ss;
  ss.precision(6);
  ss << *v;
  return ss.str();
}

}  // namespace

std::string_view ToString(Denominator v) {
  return v == Denominator::kKirillov ? "kirillov" : "eq1-literal";
}
std::string_view ToString(Aggregate v) {
  return v == Aggregate::kMacroClass ? "macro-class" : "macro-image";
}
std::string_view ToString(BpqMode v) {
  return v == BpqMode::kBoundary ? "boundary" : "min";
}
std::string_view ToString(FrequencyBasis v) {
  return v == FrequencyBasis::kPixels ? "pixels" : "instances";
}
std::string_view ToString(Metric v) {
  switch (v) {
    case Metric::kPq: return "pq";
    case Metric::kMpqPlus: return "mpq+";
    case Metric::kBpq: return "bpq";
    case Metric::kIpq: return "ipq";
    case Metric::kWpq: return "wpq";
    case Metric::kFwpq: return "fwpq";
    case Metric::kR2: return "r2";
  }
  return "?";
}

Denominator ParseDenominator(std::string_view s) {
  if (s == "kirillov") return Denominator::kKirillov;
  if (s == "eq1" || s == "eq1-literal") return Denominator::kEq1Literal;
  throw Error(ErrorCode::kInvalidParameter,
              "unknown denominator '" + std::string(s) + "'");
}

Aggregate ParseAggregate(std::string_view s) {
  if (s == "class" || s == "macro-class") return Aggregate::kMacroClass;
  if (s == "image" || s == "macro-image") return Aggregate::kMacroImage;
  throw Error(ErrorCode::kInvalidParameter,
              "unknown aggregate '" + std::string(s) + "'");
}

BpqMode ParseBpqMode(std::string_view s) {
  if (s == "boundary") return BpqMode::kBoundary;
  if (s == "min") return BpqMode::kMin;
  throw Error(ErrorCode::kInvalidParameter,
              "unknown bpq mode '" + std::string(s) + "'");
}

FrequencyBasis ParseFrequencyBasis(std::string_view s) {
  if (s == "pixels") return FrequencyBasis::kPixels;
  if (s == "instances") return FrequencyBasis::kInstances;
  throw Error(ErrorCode::kInvalidParameter,
              "unknown frequency basis '" + std::string(s) + "'");
}

Metric ParseMetric(std::string_view s) {
  for (Metric m : AllMetrics()) {
    if (ToString(m) == s) return m;
  }
  if (s == "mpq_plus" || s == "mpqplus") return Metric::kMpqPlus;
  throw Error(ErrorCode::kInvalidParameter,
              "unknown metric '" + std::string(s) + "'");
}

std::vector<Metric> ParseMetricList(std::string_view comma_separated) {
  std::set<Metric> seen;
  std::size_t start = 0;
  while (start <= comma_separated.size()) {
    std::size_t end = comma_separated.find(',', start);
    if (end == std::string_view::npos) end = comma_separated.size();
    const std::string_view token = comma_separated.substr(start, end - start);
    if (!token.empty()) seen.insert(ParseMetric(token));
    start = end + 1;
  }
  if (seen.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "empty metric list");
  }
  return {seen.begin(), seen.end()};
}

std::vector<Metric> AllMetrics() {
  return {Metric::kPq,  Metric::kMpqPlus, Metric::kBpq, Metric::kIpq,
          Metric::kWpq, Metric::kFwpq,    Metric::kR2};
}

bool MetricConfig::Wants(Metric m) const {
  return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
}

MatchOptions MetricConfig::match_options() const {
  MatchOptions o;
  o.threshold = match_threshold;
  o.subtract_void = subtract_void_from_iou;
  o.inclusive_threshold = fault_inclusive_threshold;
  return o;
}

void MetricConfig::Check() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidParameter, what);
  };
  if (!(bpq_d > 0.0 && bpq_d <= 1.0)) fail("bpq d must lie in (0, 1]");
  if (!(wpq_d > 0.0 && wpq_d <= 1.0)) fail("wpq d must lie in (0, 1]");
  if (!(wpq_a >= 1.0) || !std::isfinite(wpq_a)) fail("wpq a must be >= 1");
  if (!(match_threshold >= 0.0 && match_threshold < 1.0)) {
    fail("match threshold must lie in [0, 1)");
  }
  if (!(void_fraction_threshold >= 0.0 && void_fraction_threshold <= 1.0)) {
    fail("void fraction threshold must lie in [0, 1]");
  }
  if (metrics.empty()) fail("no metrics selected");
}

PqStats& PqStats::operator+=(const PqStats& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  quality_sum += o.quality_sum;
  return *this;
}

std::optional<QualityTriple> QualityRatio(const PqStats& s,
                                          Denominator convention) {
  if (s.total() == 0) return std::nullopt;
  const double tp = static_cast<double>(s.tp);
  const double denominator =
      convention == Denominator::kKirillov
          ? tp + 0.5 * static_cast<double>(s.fp) +
                0.5 * static_cast<double>(s.fn)
          : 0.5 * static_cast<double>(s.total());
  QualityTriple q;
  q.sq = s.tp > 0 ? s.quality_sum / tp : 0.0;
  q.rq = tp / denominator;
  q.pq = s.quality_sum / denominator;
  return q;
}

std::map<ClassId, PqStats> ComputePqStats(const MatchResult& result,
                                          const QualityFn& quality) {
  std::map<ClassId, PqStats> stats;
  for (const ClassMatch& cm : result.classes) {
    PqStats& s = stats[cm.class_id];
    s.tp = static_cast<std::int64_t>(cm.tp.size());
    s.fp = static_cast<std::int64_t>(cm.fp.size());
    s.fn = static_cast<std::int64_t>(cm.fn.size());
    for (const TpPair& pair : cm.tp) s.quality_sum += quality(cm.class_id, pair);
  }
  return stats;
}

std::map<ClassId, PqStats> ComputePqStats(const MatchResult& result) {
  return ComputePqStats(result,
                        [](ClassId, const TpPair& pair) { return pair.iou; });
}

const PqStats& ClassCell::stats(Quality q) const {
  switch (q) {
    case Quality::kBoundary: return bpq;
    case Quality::kWeighted: return wpq;
    case Quality::kIou: break;
  }
  return pq;
}

const ClassCell* ImageEvaluation::Find(ClassId class_id) const {
  for (const ClassCell& cell : cells) {
    if (cell.class_id == class_id) return &cell;
  }
  return nullptr;
}

ImageEvaluation EvaluateImage(const PanopticAnnotation& gt,
                              const PanopticAnnotation& pred,
                              const MetricConfig& config) {
  ImageEvaluation eval;
  eval.image_id = gt.image_id;

  const LabelMap& gmap = gt.label_map;
  const bool no_prediction =
      pred.label_map.width() == 0 && pred.label_map.height() == 0;
  const LabelMap pmap = no_prediction
                            ? LabelMap::Empty(gmap.width(), gmap.height())
                            : pred.label_map;

  for (const Violation& v : Validate(gt)) {
    eval.warnings.push_back("gt " + gt.image_id + ": " +
                            ViolationKindName(v.kind) + " segment " +
                            std::to_string(v.segment_id) + " (" + v.detail +
                            ")");
  }
  if (!no_prediction) {
    for (const Violation& v : Validate(pred)) {
      eval.warnings.push_back("pred " + gt.image_id + ": " +
                              ViolationKindName(v.kind) + " segment " +
                              std::to_string(v.segment_id) + " (" + v.detail +
                              ")");
    }
  }

  // Pixels are authoritative; the table only contributes crowd flags.
  auto segments_with_flags = [](const PanopticAnnotation& ann,
                                const LabelMap& map) {
    std::map<SegmentId, bool> crowd;
    for (const SegmentRecord& rec : ann.segments) {
      crowd[rec.segment_id] = crowd[rec.segment_id] || rec.ignore;
    }
    std::vector<SegmentRecord> table = SegmentTable(map);
    for (SegmentRecord& rec : table) {
      auto it = crowd.find(rec.segment_id);
      rec.ignore = it != crowd.end() && it->second;
    }
    return table;
  };
  const auto gt_segments = segments_with_flags(gt, gmap);
  const auto pred_segments = no_prediction
                                 ? std::vector<SegmentRecord>{}
                                 : segments_with_flags(pred, pmap);

  const ContingencyTable table = Contingency(gmap, pmap);
  const MatchResult matches = ApplyVoidRule(
      MatchSegments(table, gt_segments, pred_segments,
                    config.match_options()),
      table, config.void_fraction_threshold);

  const bool want_bpq = config.Wants(Metric::kBpq);
  const bool want_wpq = config.Wants(Metric::kWpq);
  std::map<SegmentId, Box> gt_boxes;
  std::map<SegmentId, Box> pred_boxes;
  int bpq_radius = 1;
  int wpq_radius = 1;
  if (want_bpq || want_wpq) {
    gt_boxes = SegmentBoxes(gmap);
    pred_boxes = SegmentBoxes(pmap);
    bpq_radius = BandRadius(config.bpq_d, gmap.width(), gmap.height());
    wpq_radius = BandRadius(config.wpq_d, gmap.width(), gmap.height());
  }

  for (const ClassMatch& cm : matches.classes) {
    ClassCell cell;
    cell.class_id = cm.class_id;
    cell.pq.tp = static_cast<std::int64_t>(cm.tp.size());
    cell.pq.fp = static_cast<std::int64_t>(cm.fp.size());
    cell.pq.fn = static_cast<std::int64_t>(cm.fn.size());
    cell.bpq = cell.pq;
    cell.wpq = cell.pq;
    for (const TpPair& pair : cm.tp) {
      cell.pq.quality_sum += pair.iou;
      if (want_bpq) {
        double b = SegmentBoundaryIou(gmap, pair.gt, gt_boxes.at(pair.gt),
                                      pmap, pair.pred,
                                      pred_boxes.at(pair.pred), bpq_radius);
        if (config.bpq_mode == BpqMode::kMin) b = std::min(b, pair.iou);
        cell.bpq.quality_sum += b;
      }
      if (want_wpq) {
        cell.wpq.quality_sum += SegmentWeightedIou(
            gmap, pair.gt, gt_boxes.at(pair.gt), pmap, pair.pred,
            pred_boxes.at(pair.pred), config.wpq_a, wpq_radius);
      }
    }
    cell.gt_count = cell.pq.tp + cell.pq.fn;
    cell.pred_count = cell.pq.tp + cell.pq.fp;
    cell.discarded = static_cast<std::int64_t>(cm.discarded.size());
    for (const TpPair& pair : cm.tp) cell.gt_pixels += table.gt_area.at(pair.gt);
    for (SegmentId id : cm.fn) cell.gt_pixels += table.gt_area.at(id);
    eval.cells.push_back(cell);
  }
  return eval;
}

std::optional<double> VanillaPq(std::span<const ImageEvaluation> images,
                                Denominator convention, Aggregate aggregate,
                                Quality quality) {
  RequireImages(images);
  if (aggregate == Aggregate::kMacroImage) {
    std::vector<double> per_image;
    for (const ImageEvaluation& image : images) {
      std::vector<double> cells;
      for (const ClassCell& cell : image.cells) {
        if (auto v = CellPq(cell.stats(quality), convention)) cells.push_back(*v);
      }
      if (auto m = Mean(cells)) per_image.push_back(*m);
    }
    return Mean(per_image);
  }
  std::map<ClassId, std::vector<double>> per_class;
  for (const ImageEvaluation& image : images) {
    for (const ClassCell& cell : image.cells) {
      if (auto v = CellPq(cell.stats(quality), convention)) {
        per_class[cell.class_id].push_back(*v);
      }
    }
  }
  std::vector<double> class_means;
  for (const auto& [cls, values] : per_class) {
    class_means.push_back(*Mean(values));
  }
  return Mean(class_means);
}

std::optional<double> MpqPlus(std::span<const ImageEvaluation> images,
                              Denominator convention) {
  RequireImages(images);
  std::vector<double> values;
  for (const auto& [cls, stats] : PoolByClass(images, Quality::kIou)) {
    if (auto v = CellPq(stats, convention)) values.push_back(*v);
  }
  return Mean(values);
}

std::optional<double> ImageIpqScore(const ImageEvaluation& image,
                                    Denominator convention) {
  std::vector<double> values;
  for (const ClassCell& cell : image.cells) {
    if (cell.gt_count == 0) continue;
    values.push_back(*CellPq(cell.pq, convention));
  }
  return Mean(values);
}

double Ipq(std::span<const ImageEvaluation> images, Denominator convention) {
  RequireImages(images);
  std::vector<double> scores;
  for (const ImageEvaluation& image : images) {
    if (auto s = ImageIpqScore(image, convention)) scores.push_back(*s);
  }
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no image has a gt segment");
  }
  return *Mean(scores);
}

double Fwpq(std::span<const ImageEvaluation> images, Denominator convention,
            FrequencyBasis basis) {
  RequireImages(images);
  std::map<ClassId, double> frequency;
  for (const ImageEvaluation& image : images) {
    for (const ClassCell& cell : image.cells) {
      frequency[cell.class_id] += static_cast<double>(
          basis == FrequencyBasis::kPixels ? cell.gt_pixels : cell.gt_count);
    }
  }
  double total = 0.0;
  for (const auto& [cls, t] : frequency) total += t;
  if (total <= 0.0) {
    throw Error(ErrorCode::kEmptyDataset, "no gt pixels to weight classes by");
  }
  const auto pooled = PoolByClass(images, Quality::kIou);
  double fwpq = 0.0;
  for (const auto& [cls, t] : frequency) {
    if (t <= 0.0) continue;
    fwpq += (t / total) * *CellPq(pooled.at(cls), convention);
  }
  return fwpq;
}

std::optional<double> RSquared(std::span<const CountPair> pairs) {
  if (pairs.size() < 2) return std::nullopt;
  double mean = 0.0;
  for (const CountPair& p : pairs) mean += p.truth;
  mean /= static_cast<double>(pairs.size());
  double residual = 0.0;
  double spread = 0.0;
  for (const CountPair& p : pairs) {
    residual += (p.predicted - p.truth) * (p.predicted - p.truth);
    spread += (p.truth - mean) * (p.truth - mean);
  }
  if (spread == 0.0) return std::nullopt;
  return 1.0 - residual / spread;
}

std::optional<double> RSquared(std::span<const ImageEvaluation> images) {
  RequireImages(images);
  std::set<ClassId> observed;
  for (const ImageEvaluation& image : images) {
    for (const ClassCell& cell : image.cells) {
      if (cell.gt_count > 0 || cell.pred_count > 0) {
        observed.insert(cell.class_id);
      }
    }
  }
  std::vector<CountPair> pairs;
  for (const ImageEvaluation& image : images) {
    for (ClassId cls : observed) {
      const ClassCell* cell = image.Find(cls);
      pairs.push_back(
          {cell ? static_cast<double>(cell->gt_count) : 0.0,
           cell ? static_cast<double>(cell->pred_count) : 0.0});
    }
  }
  return RSquared(pairs);
}

MetricReport BuildReport(std::span<const ImageEvaluation> images,
                         const MetricConfig& config,
                         const std::map<ClassId, Category>& categories) {
  RequireImages(images);
  const Denominator conv = config.denominator;
  MetricReport report;
  report.config = config;

  // Per-class block, pooled across the dataset.
  const auto pooled_iou = PoolByClass(images, Quality::kIou);
  const auto pooled_b = PoolByClass(images, Quality::kBoundary);
  const auto pooled_w = PoolByClass(images, Quality::kWeighted);
  std::map<ClassId, std::vector<double>> cell_values;
  std::map<ClassId, ClassReport> classes;
  for (const ImageEvaluation& image : images) {
    for (const ClassCell& cell : image.cells) {
      ClassReport& cr = classes[cell.class_id];
      cr.gt_pixels += cell.gt_pixels;
      cr.gt_instances += cell.gt_count;
      cr.pred_instances += cell.pred_count;
      if (auto v = CellPq(cell.pq, conv)) cell_values[cell.class_id].push_back(*v);
    }
  }
  for (auto& [cls, cr] : classes) {
    cr.class_id = cls;
    if (auto it = categories.find(cls); it != categories.end()) {
      cr.name = it->second.name;
    }
    cr.stats = pooled_iou.at(cls);
    if (auto q = QualityRatio(cr.stats, conv)) {
      cr.pq = q->pq;
      cr.sq = q->sq;
      cr.rq = q->rq;
    }
    if (config.Wants(Metric::kBpq)) cr.bpq = CellPq(pooled_b.at(cls), conv);
    if (config.Wants(Metric::kWpq)) cr.wpq = CellPq(pooled_w.at(cls), conv);
    if (auto it = cell_values.find(cls); it != cell_values.end()) {
      cr.pq_image_mean = Mean(it->second);
    }
    report.per_class.push_back(cr);
  }

  for (const ImageEvaluation& image : images) {
    ImageReport ir;
    ir.image_id = image.image_id;
    std::vector<double> cells;
    for (const ClassCell& cell : image.cells) {
      if (auto v = CellPq(cell.pq, conv)) cells.push_back(*v);
      ir.tp += cell.pq.tp;
      ir.fp += cell.pq.fp;
      ir.fn += cell.pq.fn;
      ir.discarded += cell.discarded;
      if (cell.gt_count == 0) ir.nulled_fp += cell.pq.fp;
    }
    ir.pq = Mean(cells);
    ir.ipq_score = ImageIpqScore(image, conv);
    report.counts.tp += ir.tp;
    report.counts.fp += ir.fp;
    report.counts.fn += ir.fn;
    report.counts.discarded += ir.discarded;
    report.counts.nulled_fp += ir.nulled_fp;
    report.per_image.push_back(ir);
    for (const std::string& w : image.warnings) report.warnings.push_back(w);
  }
  report.counts.images = static_cast<std::int64_t>(images.size());

  AggregateValues& agg = report.aggregate;
  const Aggregate mode = config.aggregate;
  if (config.Wants(Metric::kPq)) {
    agg.pq = VanillaPq(images, conv, mode, Quality::kIou);
  }
  if (config.Wants(Metric::kMpqPlus)) agg.mpq_plus = MpqPlus(images, conv);
  if (config.Wants(Metric::kBpq)) {
    agg.bpq = VanillaPq(images, conv, mode, Quality::kBoundary);
  }
  if (config.Wants(Metric::kWpq)) {
    agg.wpq = VanillaPq(images, conv, mode, Quality::kWeighted);
  }
  if (config.Wants(Metric::kIpq)) {
    try {
      agg.ipq = Ipq(images, conv);
    } catch (const Error& e) {
      report.warnings.push_back(std::string("ipq undefined: ") + e.what());
    }
  }
  if (config.Wants(Metric::kFwpq)) {
    try {
      agg.fwpq = Fwpq(images, conv, config.frequency_basis);
    } catch (const Error& e) {
      report.warnings.push_back(std::string("fwpq undefined: ") + e.what());
    }
  }
  if (config.Wants(Metric::kR2)) agg.r2 = RSquared(images);

  if (config.all_aggregates) {
    auto values = [&](Aggregate a) {
      ConventionValues v;
      if (config.Wants(Metric::kPq)) v.pq = VanillaPq(images, conv, a);
      if (config.Wants(Metric::kBpq)) {
        v.bpq = VanillaPq(images, conv, a, Quality::kBoundary);
      }
      if (config.Wants(Metric::kWpq)) {
        v.wpq = VanillaPq(images, conv, a, Quality::kWeighted);
      }
      return v;
    };
    report.macro_class = values(Aggregate::kMacroClass);
    report.macro_image = values(Aggregate::kMacroImage);
  }

  if (agg.wpq && agg.fwpq && agg.ipq && agg.pq) {
    const bool holds =
        *agg.wpq >= *agg.fwpq && *agg.fwpq >= *agg.ipq && *agg.ipq >= *agg.pq;
    report.observations.push_back(
        std::string("ranking wPQ >= fwPQ >= iPQ >= PQ ") +
        (holds ? "holds" : "does not hold") + " (wPQ=" + FormatValue(agg.wpq) +
        ", fwPQ=" + FormatValue(agg.fwpq) + ", iPQ=" + FormatValue(agg.ipq) +
        ", PQ=" + FormatValue(agg.pq) + ")");
  }
  return report;
}

}  // namespace pqsuite
