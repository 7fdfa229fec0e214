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

#include "pqsuite/oracle/oracle.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <map>
#include <optional>
#include <string>

#include "pqsuite/error.h"

namespace pqsuite::oracle {
namespace {

std::int64_t IntersectionSize(const std::set<Pixel>& a,
                              const std::set<Pixel>& b) {
  std::vector<Pixel> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(both));
  return static_cast<std::int64_t>(both.size());
}

void Guard(int width, int height, int limit) {
  if (width > limit || height > limit) {
    throw Error(ErrorCode::kFrameTooLarge,
                std::to_string(width) + "x" + std::to_string(height) +
                    " exceeds the oracle limit of " + std::to_string(limit));
  }
}

std::set<Pixel> MaskPixels(const BinaryMask& m) {
  std::set<Pixel> out;
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (m.bits[static_cast<std::size_t>(y) * m.width + x]) out.insert({x, y});
    }
  }
  return out;
}

std::int64_t SquaredDistance(const Pixel& a, const Pixel& b) {
  const std::int64_t dx = a.first - b.first;
  const std::int64_t dy = a.second - b.second;
  return dx * dx + dy * dy;
}

// 4 d^2 < (2r + 1)^2: the centre lies closer than r to the contour, which
// sits half a pixel from the nearest pixel on the other side.
bool Near(std::int64_t d2, int r) {
  return 4 * d2 < (2 * r + 1) * (2 * r + 1);
}

std::set<Pixel> Band(const std::set<Pixel>& mask, int width, int height,
                     int r) {
  std::vector<Pixel> outside;
  for (int y = -1; y <= height; ++y) {
    for (int x = -1; x <= width; ++x) {
      const bool in_frame = x >= 0 && y >= 0 && x < width && y < height;
      if (!in_frame || !mask.contains({x, y})) outside.push_back({x, y});
    }
  }
  std::set<Pixel> band;
  for (const Pixel& p : mask) {
    for (const Pixel& q : outside) {
      if (Near(SquaredDistance(p, q), r)) {
        band.insert(p);
        break;
      }
    }
  }
  return band;
}

double BandIouOf(const std::set<Pixel>& g, const std::set<Pixel>& p,
                 int width, int height, int r) {
  const auto bg = Band(g, width, height, r);
  const auto bp = Band(p, width, height, r);
  std::set<Pixel> uni = bg;
  uni.insert(bp.begin(), bp.end());
  if (uni.empty()) throw Error(ErrorCode::kEmptyMask, "empty bands");
  return static_cast<double>(IntersectionSize(bg, bp)) /
         static_cast<double>(uni.size());
}

double WeightedIouOf(const std::set<Pixel>& g, const std::set<Pixel>& p,
                     int width, int height, double a, int r) {
  const auto inner = Band(g, width, height, r);
  auto weight = [&](const Pixel& q) {
    if (g.contains(q)) return inner.contains(q) ? a : 1.0;
    for (const Pixel& s : g) {
      if (Near(SquaredDistance(q, s), r)) return a;
    }
    return 1.0;
  };
  std::set<Pixel> uni = g;
  uni.insert(p.begin(), p.end());
  double num = 0.0;
  double den = 0.0;
  for (const Pixel& q : uni) {
    const double w = weight(q);
    den += w;
    if (g.contains(q) && p.contains(q)) num += w;
  }
  if (den == 0.0) throw Error(ErrorCode::kEmptyMask, "empty union");
  return num / den;
}

struct Stats {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double iou = 0.0;
  double boundary = 0.0;
  double weighted = 0.0;
};

struct Cell {
  Stats s;
  std::int64_t discarded = 0;
  std::int64_t gt_pixels = 0;
};

std::optional<double> Pq(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                         double sum, Denominator conv) {
  if (tp + fp + fn == 0) return std::nullopt;
  const double den = conv == Denominator::kKirillov
                         ? static_cast<double>(tp) + 0.5 * fp + 0.5 * fn
                         : 0.5 * static_cast<double>(tp + fp + fn);
  return sum / den;
}

std::optional<double> Average(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

using ImageCells = std::map<ClassId, Cell>;

ImageCells EvaluatePair(const PanopticAnnotation& gt,
                        const PanopticAnnotation* pred,
                        const MetricConfig& config) {
  const int w = gt.label_map.width();
  const int h = gt.label_map.height();
  Guard(w, h, kMaxBandSide);
  const auto gsets = PixelSets(gt);
  std::vector<PixelSet> psets;
  if (pred != nullptr && pred->label_map.width() + pred->label_map.height() > 0) {
    if (pred->label_map.width() != w || pred->label_map.height() != h) {
      throw Error(ErrorCode::kDimensionMismatch, "frames differ");
    }
    psets = PixelSets(*pred);
  }

  std::set<Pixel> gt_covered;
  for (const PixelSet& g : gsets) gt_covered.insert(g.pixels.begin(), g.pixels.end());

  const int rb = config.Wants(Metric::kBpq)
                     ? OracleBandRadius(config.bpq_d, w, h)
                     : 1;
  const int rw = config.Wants(Metric::kWpq)
                     ? OracleBandRadius(config.wpq_d, w, h)
                     : 1;

  std::set<ClassId> classes;
  for (const PixelSet& g : gsets) classes.insert(g.class_id);
  for (const PixelSet& p : psets) classes.insert(p.class_id);

  ImageCells cells;
  for (ClassId c : classes) {
    Cell& cell = cells[c];
    struct Cand {
      double iou;
      std::size_t pi;
      std::size_t gi;
    };
    std::vector<Cand> cands;
    for (std::size_t gi = 0; gi < gsets.size(); ++gi) {
      const PixelSet& g = gsets[gi];
      if (g.class_id != c || g.crowd) continue;
      for (std::size_t pi = 0; pi < psets.size(); ++pi) {
        const PixelSet& p = psets[pi];
        if (p.class_id != c) continue;
        const std::int64_t inter = IntersectionSize(g.pixels, p.pixels);
        if (inter == 0) continue;
        std::int64_t parea = static_cast<std::int64_t>(p.pixels.size());
        if (config.subtract_void_from_iou) {
          std::int64_t on_void = 0;
          for (const Pixel& q : p.pixels) on_void += gt_covered.contains(q) ? 0 : 1;
          parea -= on_void;
        }
        const double iou =
            static_cast<double>(inter) /
            static_cast<double>(static_cast<std::int64_t>(g.pixels.size()) +
                                parea - inter);
        if (iou > config.match_threshold) cands.push_back({iou, pi, gi});
      }
    }
    std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
      if (a.iou != b.iou) return a.iou > b.iou;
      if (psets[a.pi].id != psets[b.pi].id) return psets[a.pi].id < psets[b.pi].id;
      return gsets[a.gi].id < gsets[b.gi].id;
    });
    std::set<std::size_t> gdone;
    std::set<std::size_t> pdone;
    std::vector<Cand> tps;
    for (const Cand& cd : cands) {
      if (gdone.contains(cd.gi) || pdone.contains(cd.pi)) continue;
      gdone.insert(cd.gi);
      pdone.insert(cd.pi);
      tps.push_back(cd);
    }
    std::sort(tps.begin(), tps.end(), [&](const Cand& a, const Cand& b) {
      return gsets[a.gi].id < gsets[b.gi].id;
    });
    for (const Cand& cd : tps) {
      const PixelSet& g = gsets[cd.gi];
      const PixelSet& p = psets[cd.pi];
      ++cell.s.tp;
      cell.s.iou += cd.iou;
      cell.gt_pixels += static_cast<std::int64_t>(g.pixels.size());
      if (config.Wants(Metric::kBpq)) {
        double b = BandIouOf(g.pixels, p.pixels, w, h, rb);
        if (config.bpq_mode == BpqMode::kMin) b = std::min(b, cd.iou);
        cell.s.boundary += b;
      }
      if (config.Wants(Metric::kWpq)) {
        cell.s.weighted +=
            WeightedIouOf(g.pixels, p.pixels, w, h, config.wpq_a, rw);
      }
    }
    for (std::size_t gi = 0; gi < gsets.size(); ++gi) {
      const PixelSet& g = gsets[gi];
      if (g.class_id != c || g.crowd || gdone.contains(gi)) continue;
      ++cell.s.fn;
      cell.gt_pixels += static_cast<std::int64_t>(g.pixels.size());
    }
    for (std::size_t pi = 0; pi < psets.size(); ++pi) {
      const PixelSet& p = psets[pi];
      if (p.class_id != c || pdone.contains(pi)) continue;
      std::int64_t absorbed = 0;
      for (const Pixel& q : p.pixels) {
        if (!gt_covered.contains(q)) ++absorbed;
      }
      for (const PixelSet& g : gsets) {
        if (g.crowd && g.class_id == c) absorbed += IntersectionSize(g.pixels, p.pixels);
      }
      if (static_cast<double>(absorbed) / static_cast<double>(p.pixels.size()) >
          config.void_fraction_threshold) {
        ++cell.discarded;
      } else {
        ++cell.s.fp;
      }
    }
  }
  return cells;
}

void Mismatch(std::vector<std::string>& out, const std::string& where,
              const std::optional<double>& a, const std::optional<double>& b,
              double tol) {
  auto show = [](const std::optional<double>& v) {
    if (!v) return std::string("null");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", *v);
    return std::string(buf);
  };
  if (a.has_value() != b.has_value() ||
      (a && !(std::fabs(*a - *b) <= tol))) {
    out.push_back(where + ": " + show(a) + " vs " + show(b));
  }
}

void MismatchCount(std::vector<std::string>& out, const std::string& where,
                   std::int64_t a, std::int64_t b) {
  if (a != b) {
    out.push_back(where + ": " + std::to_string(a) + " vs " +
                  std::to_string(b));
  }
}

}  // namespace

std::vector<PixelSet> PixelSets(const PanopticAnnotation& annotation) {
  const LabelMap& m = annotation.label_map;
  std::map<SegmentId, PixelSet> by_id;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const SegmentId id = m.instance_at(x, y);
      if (id == kNoInstance) continue;
      PixelSet& s = by_id[id];
      s.id = id;
      s.class_id = m.class_at(x, y);
      s.pixels.insert({x, y});
    }
  }
  for (const SegmentRecord& r : annotation.segments) {
    auto it = by_id.find(r.segment_id);
    if (it != by_id.end() && r.ignore) it->second.crowd = true;
  }
  std::vector<PixelSet> out;
  for (auto& [id, s] : by_id) out.push_back(std::move(s));
  return out;
}

ContingencyTable OracleContingency(const LabelMap& gt, const LabelMap& pred) {
  Guard(gt.width(), gt.height(), kMaxContingencySide);
  Guard(pred.width(), pred.height(), kMaxContingencySide);
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw Error(ErrorCode::kDimensionMismatch, "frames differ");
  }
  const auto gs = PixelSets(PanopticAnnotation{"", gt, {}});
  const auto ps = PixelSets(PanopticAnnotation{"", pred, {}});
  std::set<Pixel> gall;
  std::set<Pixel> pall;
  for (const auto& s : gs) gall.insert(s.pixels.begin(), s.pixels.end());
  for (const auto& s : ps) pall.insert(s.pixels.begin(), s.pixels.end());

  ContingencyTable t;
  t.width = gt.width();
  t.height = gt.height();
  for (const auto& g : gs) {
    t.gt_area[g.id] = static_cast<std::int64_t>(g.pixels.size());
    std::int64_t unpredicted = 0;
    for (const Pixel& q : g.pixels) unpredicted += pall.contains(q) ? 0 : 1;
    if (unpredicted > 0) t.gt_unpredicted[g.id] = unpredicted;
    for (const auto& p : ps) {
      const std::int64_t n = IntersectionSize(g.pixels, p.pixels);
      if (n > 0) t.intersections[{g.id, p.id}] = n;
    }
  }
  for (const auto& p : ps) {
    t.pred_area[p.id] = static_cast<std::int64_t>(p.pixels.size());
    std::int64_t on_void = 0;
    for (const Pixel& q : p.pixels) on_void += gall.contains(q) ? 0 : 1;
    if (on_void > 0) t.pred_void_overlap[p.id] = on_void;
  }
  std::set<Pixel> covered = gall;
  covered.insert(pall.begin(), pall.end());
  t.void_both = static_cast<std::int64_t>(gt.width()) * gt.height() -
                static_cast<std::int64_t>(covered.size());
  return t;
}

BoundaryBand OracleBand(const BinaryMask& mask, int radius_px) {
  Guard(mask.width, mask.height, kMaxBandSide);
  if (radius_px < 1) throw Error(ErrorCode::kInvalidParameter, "radius < 1");
  BoundaryBand b;
  b.radius_px = radius_px;
  b.mask = BinaryMask::Zeros(mask.width, mask.height);
  for (const Pixel& p : Band(MaskPixels(mask), mask.width, mask.height,
                             radius_px)) {
    b.mask.set(p.first, p.second, true);
  }
  return b;
}

int OracleBandRadius(double d, int width, int height) {
  if (!(d > 0.0) || d > 1.0) {
    throw Error(ErrorCode::kInvalidParameter, "d outside (0, 1]");
  }
  const double diag = std::sqrt(static_cast<double>(width) * width +
                                static_cast<double>(height) * height);
  const long r = std::lround(d * diag);
  return r < 1 ? 1 : static_cast<int>(r);
}

double OracleBoundaryIou(const BinaryMask& gt, const BinaryMask& pred,
                         int radius_px) {
  Guard(gt.width, gt.height, kMaxBandSide);
  return BandIouOf(MaskPixels(gt), MaskPixels(pred), gt.width, gt.height,
                   radius_px);
}

double OracleWeightedIou(const BinaryMask& gt, const BinaryMask& pred,
                         double a, int radius_px) {
  Guard(gt.width, gt.height, kMaxBandSide);
  return WeightedIouOf(MaskPixels(gt), MaskPixels(pred), gt.width, gt.height,
                       a, radius_px);
}

MetricReport OracleMetrics(std::span<const PanopticAnnotation> gt,
                           std::span<const PanopticAnnotation> pred,
                           const MetricConfig& config) {
  if (gt.empty()) throw Error(ErrorCode::kEmptyDataset, "no gt images");
  std::map<std::string, const PanopticAnnotation*> gmap;
  std::map<std::string, const PanopticAnnotation*> pmap;
  for (const auto& a : gt) gmap[a.image_id] = &a;
  for (const auto& a : pred) pmap[a.image_id] = &a;

  std::map<std::string, ImageCells> images;
  for (const auto& [id, g] : gmap) {
    auto it = pmap.find(id);
    images[id] = EvaluatePair(*g, it == pmap.end() ? nullptr : it->second,
                              config);
  }
  const Denominator conv = config.denominator;

  MetricReport r;
  r.config = config;

  // Per class, pooled.
  std::map<ClassId, Stats> pooled;
  std::map<ClassId, std::vector<double>> class_cells[3];
  std::map<ClassId, ClassReport> per_class;
  for (const auto& [id, cells] : images) {
    for (const auto& [c, cell] : cells) {
      Stats& s = pooled[c];
      s.tp += cell.s.tp;
      s.fp += cell.s.fp;
      s.fn += cell.s.fn;
      s.iou += cell.s.iou;
      s.boundary += cell.s.boundary;
      s.weighted += cell.s.weighted;
      ClassReport& cr = per_class[c];
      cr.class_id = c;
      cr.gt_pixels += cell.gt_pixels;
      cr.gt_instances += cell.s.tp + cell.s.fn;
      cr.pred_instances += cell.s.tp + cell.s.fp;
      const double sums[3] = {cell.s.iou, cell.s.boundary, cell.s.weighted};
      for (int q = 0; q < 3; ++q) {
        if (auto v = Pq(cell.s.tp, cell.s.fp, cell.s.fn, sums[q], conv)) {
          class_cells[q][c].push_back(*v);
        }
      }
    }
  }
  for (auto& [c, cr] : per_class) {
    const Stats& s = pooled[c];
    cr.stats = {s.tp, s.fp, s.fn, s.iou};
    cr.pq = Pq(s.tp, s.fp, s.fn, s.iou, conv);
    if (cr.pq) {
      cr.sq = s.tp > 0 ? s.iou / static_cast<double>(s.tp) : 0.0;
      cr.rq = Pq(s.tp, s.fp, s.fn, static_cast<double>(s.tp), conv);
    }
    if (config.Wants(Metric::kBpq)) cr.bpq = Pq(s.tp, s.fp, s.fn, s.boundary, conv);
    if (config.Wants(Metric::kWpq)) cr.wpq = Pq(s.tp, s.fp, s.fn, s.weighted, conv);
    cr.pq_image_mean = Average(class_cells[0][c]);
    r.per_class.push_back(cr);
  }

  // Per image.
  std::vector<double> image_means[3];
  std::vector<double> ipq_scores;
  for (const auto& [id, cells] : images) {
    ImageReport ir;
    ir.image_id = id;
    std::vector<double> vals[3];
    std::vector<double> present;
    for (const auto& [c, cell] : cells) {
      const double sums[3] = {cell.s.iou, cell.s.boundary, cell.s.weighted};
      for (int q = 0; q < 3; ++q) {
        if (auto v = Pq(cell.s.tp, cell.s.fp, cell.s.fn, sums[q], conv)) {
          vals[q].push_back(*v);
        }
      }
      if (cell.s.tp + cell.s.fn > 0) {
        present.push_back(*Pq(cell.s.tp, cell.s.fp, cell.s.fn, cell.s.iou, conv));
      } else {
        ir.nulled_fp += cell.s.fp;
      }
      ir.tp += cell.s.tp;
      ir.fp += cell.s.fp;
      ir.fn += cell.s.fn;
      ir.discarded += cell.discarded;
    }
    ir.pq = Average(vals[0]);
    ir.ipq_score = Average(present);
    if (ir.ipq_score) ipq_scores.push_back(*ir.ipq_score);
    for (int q = 0; q < 3; ++q) {
      if (auto m = Average(vals[q])) image_means[q].push_back(*m);
    }
    r.counts.tp += ir.tp;
    r.counts.fp += ir.fp;
    r.counts.fn += ir.fn;
    r.counts.discarded += ir.discarded;
    r.counts.nulled_fp += ir.nulled_fp;
    r.per_image.push_back(ir);
  }
  r.counts.images = static_cast<std::int64_t>(images.size());

  auto macro_class = [&](int q) {
    std::vector<double> means;
    for (const auto& [c, v] : class_cells[q]) means.push_back(*Average(v));
    return Average(means);
  };
  auto macro = [&](Aggregate a, int q) {
    return a == Aggregate::kMacroClass ? macro_class(q)
                                       : Average(image_means[q]);
  };

  AggregateValues& agg = r.aggregate;
  if (config.Wants(Metric::kPq)) agg.pq = macro(config.aggregate, 0);
  if (config.Wants(Metric::kBpq)) agg.bpq = macro(config.aggregate, 1);
  if (config.Wants(Metric::kWpq)) agg.wpq = macro(config.aggregate, 2);
  if (config.Wants(Metric::kMpqPlus)) {
    std::vector<double> v;
    for (const auto& [c, s] : pooled) {
      if (auto p = Pq(s.tp, s.fp, s.fn, s.iou, conv)) v.push_back(*p);
    }
    agg.mpq_plus = Average(v);
  }
  if (config.Wants(Metric::kIpq)) agg.ipq = Average(ipq_scores);
  if (config.Wants(Metric::kFwpq)) {
    double total = 0.0;
    for (const auto& [c, cr] : per_class) {
      total += config.frequency_basis == FrequencyBasis::kPixels
                   ? static_cast<double>(cr.gt_pixels)
                   : static_cast<double>(cr.gt_instances);
    }
    if (total > 0.0) {
      double acc = 0.0;
      for (const auto& [c, cr] : per_class) {
        const double t = config.frequency_basis == FrequencyBasis::kPixels
                             ? static_cast<double>(cr.gt_pixels)
                             : static_cast<double>(cr.gt_instances);
        if (t > 0.0) acc += t / total * *cr.pq;
      }
      agg.fwpq = acc;
    }
  }
  if (config.Wants(Metric::kR2)) {
    std::set<ClassId> observed;
    for (const auto& [id, cells] : images) {
      for (const auto& [c, cell] : cells) {
        if (cell.s.tp + cell.s.fn + cell.s.fp > 0) observed.insert(c);
      }
    }
    std::vector<std::pair<double, double>> yy;
    for (const auto& [id, cells] : images) {
      for (ClassId c : observed) {
        auto it = cells.find(c);
        const double y = it == cells.end() ? 0.0 : it->second.s.tp + it->second.s.fn;
        const double yh = it == cells.end() ? 0.0 : it->second.s.tp + it->second.s.fp;
        yy.push_back({y, yh});
      }
    }
    if (yy.size() >= 2) {
      double mean = 0.0;
      for (const auto& [y, yh] : yy) mean += y;
      mean /= static_cast<double>(yy.size());
      double ss_res = 0.0;
      double ss_tot = 0.0;
      for (const auto& [y, yh] : yy) {
        ss_res += (yh - y) * (yh - y);
        ss_tot += (y - mean) * (y - mean);
      }
      if (ss_tot > 0.0) agg.r2 = 1.0 - ss_res / ss_tot;
    }
  }
  if (config.all_aggregates) {
    for (Aggregate a : {Aggregate::kMacroClass, Aggregate::kMacroImage}) {
      ConventionValues v;
      if (config.Wants(Metric::kPq)) v.pq = macro(a, 0);
      if (config.Wants(Metric::kBpq)) v.bpq = macro(a, 1);
      if (config.Wants(Metric::kWpq)) v.wpq = macro(a, 2);
      (a == Aggregate::kMacroClass ? r.macro_class : r.macro_image) = v;
    }
  }
  return r;
}

std::vector<std::string> CompareReports(const MetricReport& actual,
                                        const MetricReport& expected,
                                        double tol) {
  std::vector<std::string> out;
  const AggregateValues& a = actual.aggregate;
  const AggregateValues& e = expected.aggregate;
  Mismatch(out, "aggregate.pq", a.pq, e.pq, tol);
  Mismatch(out, "aggregate.mpq_plus", a.mpq_plus, e.mpq_plus, tol);
  Mismatch(out, "aggregate.bpq", a.bpq, e.bpq, tol);
  Mismatch(out, "aggregate.ipq", a.ipq, e.ipq, tol);
  Mismatch(out, "aggregate.wpq", a.wpq, e.wpq, tol);
  Mismatch(out, "aggregate.fwpq", a.fwpq, e.fwpq, tol);
  Mismatch(out, "aggregate.r2", a.r2, e.r2, tol);

  auto conventions = [&](const std::string& name,
                         const std::optional<ConventionValues>& x,
                         const std::optional<ConventionValues>& y) {
    if (x.has_value() != y.has_value()) {
      out.push_back(name + ": present in only one report");
      return;
    }
    if (!x) return;
    Mismatch(out, name + ".pq", x->pq, y->pq, tol);
    Mismatch(out, name + ".bpq", x->bpq, y->bpq, tol);
    Mismatch(out, name + ".wpq", x->wpq, y->wpq, tol);
  };
  conventions("macro_class", actual.macro_class, expected.macro_class);
  conventions("macro_image", actual.macro_image, expected.macro_image);

  MismatchCount(out, "counts.images", actual.counts.images, expected.counts.images);
  MismatchCount(out, "counts.tp", actual.counts.tp, expected.counts.tp);
  MismatchCount(out, "counts.fp", actual.counts.fp, expected.counts.fp);
  MismatchCount(out, "counts.fn", actual.counts.fn, expected.counts.fn);
  MismatchCount(out, "counts.discarded", actual.counts.discarded,
                expected.counts.discarded);
  MismatchCount(out, "counts.nulled_fp", actual.counts.nulled_fp,
                expected.counts.nulled_fp);

  if (actual.per_class.size() != expected.per_class.size()) {
    out.push_back("per_class: " + std::to_string(actual.per_class.size()) +
                  " vs " + std::to_string(expected.per_class.size()) +
                  " classes");
  } else {
    for (std::size_t i = 0; i < actual.per_class.size(); ++i) {
      const ClassReport& x = actual.per_class[i];
      const ClassReport& y = expected.per_class[i];
      const std::string p = "class " + std::to_string(y.class_id);
      MismatchCount(out, p + ".id", x.class_id, y.class_id);
      MismatchCount(out, p + ".tp", x.stats.tp, y.stats.tp);
      MismatchCount(out, p + ".fp", x.stats.fp, y.stats.fp);
      MismatchCount(out, p + ".fn", x.stats.fn, y.stats.fn);
      Mismatch(out, p + ".iou_sum", x.stats.quality_sum, y.stats.quality_sum, tol);
      Mismatch(out, p + ".pq", x.pq, y.pq, tol);
      Mismatch(out, p + ".sq", x.sq, y.sq, tol);
      Mismatch(out, p + ".rq", x.rq, y.rq, tol);
      Mismatch(out, p + ".bpq", x.bpq, y.bpq, tol);
      Mismatch(out, p + ".wpq", x.wpq, y.wpq, tol);
      Mismatch(out, p + ".pq_image_mean", x.pq_image_mean, y.pq_image_mean, tol);
      MismatchCount(out, p + ".gt_pixels", x.gt_pixels, y.gt_pixels);
      MismatchCount(out, p + ".gt_instances", x.gt_instances, y.gt_instances);
      MismatchCount(out, p + ".pred_instances", x.pred_instances,
                    y.pred_instances);
    }
  }

  if (actual.per_image.size() != expected.per_image.size()) {
    out.push_back("per_image: " + std::to_string(actual.per_image.size()) +
                  " vs " + std::to_string(expected.per_image.size()) +
                  " images");
  } else {
    for (std::size_t i = 0; i < actual.per_image.size(); ++i) {
      const ImageReport& x = actual.per_image[i];
      const ImageReport& y = expected.per_image[i];
      const std::string p = "image " + y.image_id;
      if (x.image_id != y.image_id) out.push_back(p + ": id " + x.image_id);
      Mismatch(out, p + ".pq", x.pq, y.pq, tol);
      Mismatch(out, p + ".ipq_score", x.ipq_score, y.ipq_score, tol);
      MismatchCount(out, p + ".tp", x.tp, y.tp);
      MismatchCount(out, p + ".fp", x.fp, y.fp);
      MismatchCount(out, p + ".fn", x.fn, y.fn);
      MismatchCount(out, p + ".discarded", x.discarded, y.discarded);
      MismatchCount(out, p + ".nulled_fp", x.nulled_fp, y.nulled_fp);
    }
  }
  return out;
}

}  // namespace pqsuite::oracle
