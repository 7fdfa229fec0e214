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

#include "pqsuite/matching.h"

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

#include "pqsuite/error.h"

namespace pqsuite {

std::int64_t ContingencyTable::Intersection(SegmentId gt,
                                            SegmentId pred) const {
  auto it = intersections.find({gt, pred});
  return it == intersections.end() ? 0 : it->second;
}

std::int64_t ContingencyTable::VoidOverlap(SegmentId pred) const {
  auto it = pred_void_overlap.find(pred);
  return it == pred_void_overlap.end() ? 0 : it->second;
}

ContingencyTable Contingency(const LabelMap& gt, const LabelMap& pred) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "gt " + std::to_string(gt.width()) + "x" +
                    std::to_string(gt.height()) + " vs pred " +
                    std::to_string(pred.width()) + "x" +
                    std::to_string(pred.height()));
  }
  const auto g = gt.instance_plane();
  const auto p = pred.instance_plane();

  std::unordered_map<std::uint64_t, std::int64_t> joint;
  std::uint64_t last_key = ~0ULL;
  std::int64_t* last_count = nullptr;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::uint64_t key = (static_cast<std::uint64_t>(g[i]) << 32) | p[i];
    if (key != last_key) {
      last_key = key;
      last_count = &joint[key];
    }
    ++*last_count;
  }

  ContingencyTable table;
  table.width = gt.width();
  table.height = gt.height();
  for (const auto& [key, count] : joint) {
    const auto gid = static_cast<SegmentId>(key >> 32);
    const auto pid = static_cast<SegmentId>(key & 0xffffffffu);
    if (gid != kNoInstance) table.gt_area[gid] += count;
    if (pid != kNoInstance) table.pred_area[pid] += count;
    if (gid != kNoInstance && pid != kNoInstance) {
      table.intersections[{gid, pid}] = count;
    } else if (pid != kNoInstance) {
      table.pred_void_overlap[pid] = count;
    } else if (gid != kNoInstance) {
      table.gt_unpredicted[gid] = count;
    } else {
      table.void_both = count;
    }
  }
  return table;
}

double Iou(std::int64_t intersection, std::int64_t gt_area,
           std::int64_t pred_area) {
  if (gt_area <= 0 || pred_area <= 0 || intersection < 0 ||
      intersection > std::min(gt_area, pred_area)) {
    throw Error(ErrorCode::kInvalidCounts,
                "intersection " + std::to_string(intersection) +
                    " with areas " + std::to_string(gt_area) + ", " +
                    std::to_string(pred_area));
  }
  return static_cast<double>(intersection) /
         static_cast<double>(gt_area + pred_area - intersection);
}

const ClassMatch* MatchResult::Find(ClassId class_id) const {
  auto it = std::lower_bound(
      classes.begin(), classes.end(), class_id,
      [](const ClassMatch& m, ClassId c) { return m.class_id < c; });
  if (it == classes.end() || it->class_id != class_id) return nullptr;
  return &*it;
}

MatchResult MatchSegments(const ContingencyTable& table,
                          std::span<const SegmentRecord> gt_segments,
                          std::span<const SegmentRecord> pred_segments,
                          const MatchOptions& options) {
  std::map<ClassId, ClassMatch> by_class;
  std::map<SegmentId, const SegmentRecord*> gt_by_id;
  std::map<SegmentId, const SegmentRecord*> pred_by_id;
  for (const SegmentRecord& rec : gt_segments) {
    gt_by_id.emplace(rec.segment_id, &rec);
    by_class[rec.class_id].class_id = rec.class_id;
  }
  for (const SegmentRecord& rec : pred_segments) {
    pred_by_id.emplace(rec.segment_id, &rec);
    by_class[rec.class_id].class_id = rec.class_id;
  }

  struct Candidate {
    double iou;
    SegmentId pred;
    SegmentId gt;
  };
  std::map<ClassId, std::vector<Candidate>> candidates;
  for (const auto& [key, inter] : table.intersections) {
    auto g = gt_by_id.find(key.first);
    auto p = pred_by_id.find(key.second);
    if (g == gt_by_id.end() || p == pred_by_id.end()) continue;
    const SegmentRecord& gr = *g->second;
    const SegmentRecord& pr = *p->second;
    if (gr.ignore || gr.class_id != pr.class_id) continue;
    const std::int64_t gt_area = table.gt_area.at(gr.segment_id);
    std::int64_t pred_area = table.pred_area.at(pr.segment_id);
    if (options.subtract_void) pred_area -= table.VoidOverlap(pr.segment_id);
    const double iou = static_cast<double>(inter) /
                       static_cast<double>(gt_area + pred_area - inter);
    const bool pass = options.inclusive_threshold ? iou >= options.threshold
                                                  : iou > options.threshold;
    if (pass) candidates[gr.class_id].push_back({iou, pr.segment_id,
                                                 gr.segment_id});
  }

  std::set<SegmentId> matched_gt;
  std::set<SegmentId> matched_pred;
  for (auto& [cls, list] : candidates) {
    std::sort(list.begin(), list.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.iou != b.iou) return a.iou > b.iou;
                return std::tie(a.pred, a.gt) < std::tie(b.pred, b.gt);
              });
    ClassMatch& cm = by_class[cls];
    for (const Candidate& c : list) {
      if (matched_gt.contains(c.gt) || matched_pred.contains(c.pred)) continue;
      matched_gt.insert(c.gt);
      matched_pred.insert(c.pred);
      cm.tp.push_back({c.gt, c.pred, c.iou});
    }
    std::sort(cm.tp.begin(), cm.tp.end(),
              [](const TpPair& a, const TpPair& b) { return a.gt < b.gt; });
  }

  for (const auto& [id, rec] : gt_by_id) {
    ClassMatch& cm = by_class[rec->class_id];
    if (rec->ignore) {
      cm.ignored_gt.push_back(id);
    } else if (!matched_gt.contains(id)) {
      cm.fn.push_back(id);
    }
  }
  for (const auto& [id, rec] : pred_by_id) {
    if (!matched_pred.contains(id)) by_class[rec->class_id].fp.push_back(id);
  }

  MatchResult result;
  for (auto& [cls, cm] : by_class) result.classes.push_back(std::move(cm));
  return result;
}

MatchResult ApplyVoidRule(MatchResult result, const ContingencyTable& table,
                          double void_fraction_threshold) {
  for (ClassMatch& cm : result.classes) {
    std::vector<SegmentId> kept;
    for (SegmentId pred : cm.fp) {
      std::int64_t absorbed = table.VoidOverlap(pred);
      for (SegmentId crowd : cm.ignored_gt) {
        absorbed += table.Intersection(crowd, pred);
      }
      auto area_it = table.pred_area.find(pred);
      const std::int64_t area =
          area_it == table.pred_area.end() ? 0 : area_it->second;
      if (area > 0 && static_cast<double>(absorbed) / static_cast<double>(area) >
                          void_fraction_threshold) {
        cm.discarded.push_back(pred);
      } else {
        kept.push_back(pred);
      }
    }
    cm.fp = std::move(kept);
  }
  return result;
}

}  // namespace pqsuite
