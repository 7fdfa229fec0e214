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

#include "selftest.h"

#include <algorithm>
#include <set>
#include <span>
#include <string>

#include "pqsuite/boundary.h"
#include "pqsuite/error.h"
#include "pqsuite/evaluate.h"
#include "pqsuite/matching.h"
#include "pqsuite/oracle/oracle.h"
#include "pqsuite/pqmetrics.h"
#include "pqsuite/report.h"

namespace pqsuite::tools {
namespace {

constexpr double kOracleTolerance = 1e-12;

PanopticAnnotation Square(const std::string& id, int side, int x0, int y0,
                          int w, int h) {
  const auto n = static_cast<std::size_t>(side) * side;
  std::vector<std::uint32_t> cls(n, 0);
  std::vector<std::uint32_t> inst(n, 0);
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      cls[static_cast<std::size_t>(y) * side + x] = 1;
      inst[static_cast<std::size_t>(y) * side + x] = 1;
    }
  }
  return MakeAnnotation(id, LabelMap::Build(cls, inst, side, side));
}

class Tally {
 public:
  explicit Tally(std::ostream& out) : out_(out) {}

  void Report(const std::string& name, bool pass, const std::string& detail) {
    out_ << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    all_ &= pass;
  }
  bool all() const { return all_; }

 private:
  std::ostream& out_;
  bool all_ = true;
};

bool AllOnes(const MetricReport& r) {
  const AggregateValues& a = r.aggregate;
  for (const auto& v : {a.pq, a.mpq_plus, a.bpq, a.ipq, a.wpq, a.fwpq, a.r2}) {
    if (!v || *v != 1.0) return false;
  }
  return true;
}

// Conservation and uniqueness of one image's matching.
std::string CheckMatching(const PanopticAnnotation& gt,
                          const PanopticAnnotation& pred,
                          const MetricConfig& config) {
  const ContingencyTable table = Contingency(gt.label_map, pred.label_map);
  const auto gseg = SegmentTable(gt.label_map);
  const auto pseg = SegmentTable(pred.label_map);
  const MatchResult m = ApplyVoidRule(
      MatchSegments(table, gseg, pseg, config.match_options()), table,
      config.void_fraction_threshold);
  std::set<SegmentId> gt_used;
  std::set<SegmentId> pred_used;
  for (const ClassMatch& cm : m.classes) {
    std::int64_t gt_count = 0;
    std::int64_t pred_count = 0;
    for (const auto& s : gseg) gt_count += s.class_id == cm.class_id ? 1 : 0;
    for (const auto& s : pseg) pred_count += s.class_id == cm.class_id ? 1 : 0;
    for (const TpPair& tp : cm.tp) {
      if (!gt_used.insert(tp.gt).second || !pred_used.insert(tp.pred).second) {
        return "segment matched twice in image " + gt.image_id;
      }
    }
    const auto tp = static_cast<std::int64_t>(cm.tp.size());
    if (tp + static_cast<std::int64_t>(cm.fn.size()) != gt_count ||
        tp + static_cast<std::int64_t>(cm.fp.size() + cm.discarded.size()) !=
            pred_count) {
      return "count conservation broken for class " +
             std::to_string(cm.class_id) + " in image " + gt.image_id;
    }
  }
  return "";
}

}  // namespace

std::vector<Perturbation> RandomPerturbations(SplitMix64& rng) {
  const int n = static_cast<int>(rng.UniformInt(1, 3));
  std::vector<Perturbation> chain;
  for (int i = 0; i < n; ++i) {
    Perturbation p;
    p.kind = static_cast<PerturbationKind>(rng.UniformInt(0, 7));
    p.seed = rng.Next();
    switch (p.kind) {
      case PerturbationKind::kErode:
      case PerturbationKind::kDilate:
      case PerturbationKind::kShift:
        p.magnitude = static_cast<double>(rng.UniformInt(0, 2));
        break;
      case PerturbationKind::kSpurious:
        p.magnitude = static_cast<double>(rng.UniformInt(0, 3));
        break;
      case PerturbationKind::kRelabel:
        p.magnitude = 0.3 * rng.Uniform();
        break;
      default:
        p.magnitude = 0.5 * rng.Uniform();
        break;
    }
    chain.push_back(p);
  }
  return chain;
}

std::string DescribePerturbations(const std::vector<Perturbation>& chain) {
  std::string out;
  for (const Perturbation& p : chain) {
    if (!out.empty()) out += ",";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s:%g",
                  std::string(ToString(p.kind)).c_str(), p.magnitude);
    out += buf;
  }
  return out;
}

SceneBank MakeSceneBank(std::uint64_t seed, int scenes, int side) {
  SceneBank bank;
  bank.seed = seed;
  const SplitMix64 root(seed);
  for (int i = 0; i < scenes; ++i) {
    SplitMix64 rng = root.Split(static_cast<std::uint64_t>(i));
    SceneSpec spec;
    spec.seed = rng.Next();
    spec.width = side;
    spec.height = side;
    spec.num_classes = static_cast<int>(rng.UniformInt(1, 3));
    spec.min_instances = 0;
    spec.max_instances = 3;
    spec.min_radius = 2.0;
    spec.max_radius = 4.5;
    spec.image_id = std::to_string(seed) + "-" + std::to_string(i);
    PanopticAnnotation gt = GenerateScene(spec);
    const auto chain = RandomPerturbations(rng);
    bank.pred.push_back(PerturbAll(gt, chain));
    bank.perturbations.push_back(DescribePerturbations(chain));
    bank.gt.push_back(std::move(gt));
  }
  return bank;
}

PanopticAnnotation ThresholdFixtureGt() { return Square("t", 8, 2, 2, 4, 4); }
PanopticAnnotation ThresholdFixturePred() {
  return Square("t", 8, 2, 2, 4, 2);
}

bool RunSelftest(const SelftestOptions& options, std::ostream& out) {
  Tally tally(out);
  MetricConfig base;
  base.all_aggregates = true;
  base.fault_inclusive_threshold = options.fault_inclusive_threshold;

  std::vector<SceneBank> banks;
  for (int s = 0; s < options.seeds; ++s) {
    banks.push_back(MakeSceneBank(static_cast<std::uint64_t>(s) + 1,
                                  options.scenes_per_seed));
  }
  const std::string scope = std::to_string(banks.size()) + " seed banks x " +
                            std::to_string(options.scenes_per_seed) +
                            " scenes";

  // Identity.
  {
    std::string failure;
    for (const SceneBank& bank : banks) {
      const MetricReport r = EvaluateAnnotations(bank.gt, bank.gt, base);
      if (!AllOnes(r)) {
        failure = "bank " + std::to_string(bank.seed) + " not all 1.0";
        break;
      }
    }
    tally.Report("identity", failure.empty(),
                 failure.empty() ? scope : failure);
  }

  // Oracle equivalence under every convention.
  {
    std::string failure;
    std::size_t checked = 0;
    for (const SceneBank& bank : banks) {
      for (Denominator d : {Denominator::kKirillov, Denominator::kEq1Literal}) {
        for (Aggregate a : {Aggregate::kMacroClass, Aggregate::kMacroImage}) {
          MetricConfig c = base;
          c.denominator = d;
          c.aggregate = a;
          const auto diffs = oracle::CompareReports(
              EvaluateAnnotations(bank.gt, bank.pred, c),
              oracle::OracleMetrics(bank.gt, bank.pred, c), kOracleTolerance);
          ++checked;
          if (!diffs.empty() && failure.empty()) {
            failure = "bank " + std::to_string(bank.seed) + " (" +
                      std::string(ToString(d)) + ", " +
                      std::string(ToString(a)) + "): " + diffs.front();
          }
        }
      }
    }
    tally.Report("oracle-equivalence", failure.empty(),
                 failure.empty()
                     ? scope + ", " + std::to_string(checked) + " reports"
                     : failure);
  }

  // Strict threshold on an exact-0.5 pair.
  {
    const std::vector<PanopticAnnotation> gt{ThresholdFixtureGt()};
    const std::vector<PanopticAnnotation> pred{ThresholdFixturePred()};
    const auto diffs =
        oracle::CompareReports(EvaluateAnnotations(gt, pred, base),
                               oracle::OracleMetrics(gt, pred, base),
                               kOracleTolerance);
    tally.Report("strict-threshold", diffs.empty(),
                 diffs.empty() ? "IoU 0.5 pair stays unmatched"
                               : diffs.front());
  }

  // Matching uniqueness and conservation.
  {
    std::string failure;
    std::size_t images = 0;
    for (const SceneBank& bank : banks) {
      for (std::size_t i = 0; i < bank.gt.size() && failure.empty(); ++i) {
        failure = CheckMatching(bank.gt[i], bank.pred[i], base);
        ++images;
      }
    }
    tally.Report("matching-conservation", failure.empty(),
                 failure.empty() ? std::to_string(images) + " images"
                                 : failure);
  }

  // Distance-transform bands against all-pairs distances.
  {
    std::string failure;
    std::size_t masks = 0;
    for (const SceneBank& bank : banks) {
      const PanopticAnnotation& a = bank.pred.front();
      for (const SegmentRecord& s : a.segments) {
        const BinaryMask m = BinaryMask::FromSegment(a.label_map, s.segment_id);
        for (int r = 1; r <= 3; ++r) {
          ++masks;
          if (MakeBoundaryBand(m, r).mask != oracle::OracleBand(m, r).mask &&
              failure.empty()) {
            failure = "band mismatch for segment " +
                      std::to_string(s.segment_id) + " radius " +
                      std::to_string(r);
          }
        }
      }
    }
    tally.Report("boundary-band", failure.empty(),
                 failure.empty() ? std::to_string(masks) + " bands" : failure);
  }

  // Worker count never changes the report.
  {
    bool same = true;
    for (const SceneBank& bank : banks) {
      std::string first;
      for (int jobs : {1, 4}) {
        EvaluationOptions o;
        o.jobs = jobs;
        const std::string json =
            ReportToJson(EvaluateAnnotations(bank.gt, bank.pred, base, o));
        if (first.empty()) {
          first = json;
        } else if (json != first) {
          same = false;
        }
      }
    }
    tally.Report("determinism", same, "jobs 1 vs 4 on " + scope);
  }

  out << (tally.all() ? "selftest passed" : "selftest FAILED") << " ("
      << banks.size() << " seed banks exercised)\n";
  return tally.all();
}

}  // namespace pqsuite::tools
