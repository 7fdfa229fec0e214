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

// Acceptance checks for the metric suite. Prints one PASS/FAIL line per
// criterion and exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pqsuite/boundary.h"
#include "pqsuite/evaluate.h"
#include "pqsuite/matching.h"
#include "pqsuite/oracle/oracle.h"
#include "pqsuite/panoptic_io.h"
#include "pqsuite/pqmetrics.h"
#include "pqsuite/report.h"
#include "pqsuite/synth.h"

namespace pqsuite::acceptance {
namespace {

// Reference scores carry two decimals, in percent.
constexpr double kTableTolerance = 0.01;
// Floating-point slack on top of the reference rounding.
constexpr double kRoundingSlack = 1e-9;
constexpr double kOracleTolerance = 1e-12;
constexpr double kIdentityTolerance = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome Fail(std::string detail) { return {false, std::move(detail)}; }

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

PanopticAnnotation Scene(std::uint64_t seed, int side, int classes,
                         int min_instances, int max_instances,
                         std::string image_id) {
  SceneSpec spec;
  spec.seed = seed;
  spec.width = spec.height = side;
  spec.num_classes = classes;
  spec.min_instances = min_instances;
  spec.max_instances = max_instances;
  spec.image_id = std::move(image_id);
  return GenerateScene(spec);
}

std::vector<Perturbation> RandomChain(SplitMix64& rng) {
  std::vector<Perturbation> chain;
  const int n = static_cast<int>(rng.UniformInt(1, 3));
  for (int i = 0; i < n; ++i) {
    Perturbation p;
    p.kind = static_cast<PerturbationKind>(
        rng.UniformInt(0, static_cast<int>(PerturbationKind::kRelabel)));
    switch (p.kind) {
      case PerturbationKind::kErode:
      case PerturbationKind::kDilate:
      case PerturbationKind::kShift:
        p.magnitude = static_cast<double>(rng.UniformInt(0, 2));
        break;
      case PerturbationKind::kSpurious:
        p.magnitude = static_cast<double>(rng.UniformInt(0, 3));
        break;
      default:
        p.magnitude = 0.5 * rng.Uniform();
    }
    p.seed = rng.Next();
    chain.push_back(p);
  }
  return chain;
}

// --- 1 ----------------------------------------------------------------------

struct DecompositionRow {
  const char* model;
  const char* category;
  double pq;
  double sq;
  double rq;
};

constexpr DecompositionRow kDecomposition[] = {
    {"model-b", "Epithelial", 53.31, 78.70, 67.74},
    {"model-b", "Lymphocyte", 50.76, 77.03, 65.90},
    {"model-b", "Neutrophil", 40.30, 79.46, 50.72},
    {"model-b", "Macrophage", 14.67, 77.52, 18.92},
    {"model-a", "Epithelial", 78.46, 89.06, 88.10},
    {"model-a", "Lymphocyte", 79.26, 90.72, 87.37},
    {"model-a", "Neutrophil", 76.42, 91.56, 83.47},
    {"model-a", "Macrophage", 58.27, 81.59, 71.43},
};

Outcome Decomposition() {
  double worst = 0.0;
  for (const DecompositionRow& row : kDecomposition) {
    // Counts chosen so that RQ and SQ come out exactly at the reference values:
    // tp + (fp + fn) / 2 = 10000.
    const auto tp = static_cast<std::int64_t>(std::lround(row.rq * 100));
    const PqStats stats{tp, 10000 - tp, 10000 - tp,
                        row.sq / 100.0 * static_cast<double>(tp)};
    const auto q = QualityRatio(stats, Denominator::kKirillov);
    if (!q) return Fail(std::string(row.model) + " " + row.category);
    const double diff = std::abs(q->pq * 100.0 - row.pq);
    worst = std::max(worst, diff);
    if (diff > kTableTolerance + kRoundingSlack) {
      return Fail(std::string(row.model) + " " + row.category +
                  Fmt(": PQ %.4f vs %.2f", q->pq * 100.0, row.pq));
    }
  }
  return {true, Fmt("8 rows, max |diff| %.4f pp", worst)};
}

// --- 2 ----------------------------------------------------------------------

Outcome MacroClassConsistency() {
  struct Model {
    const char* name;
    double per_class[4];
    double overall;
  };
  constexpr Model kModels[] = {
      {"model-a", {78.46, 79.26, 76.42, 58.28}, 73.11},
      {"model-b", {53.30, 50.76, 40.30, 14.67}, 39.76},
  };
  std::string detail;
  for (const Model& m : kModels) {
    ImageEvaluation image;
    image.image_id = m.name;
    for (int c = 0; c < 4; ++c) {
      ClassCell cell;
      cell.class_id = static_cast<ClassId>(c + 1);
      cell.pq = {1, 0, 0, m.per_class[c] / 100.0};
      cell.gt_count = cell.pred_count = 1;
      image.cells.push_back(cell);
    }
    const std::vector<ImageEvaluation> images{image};
    const auto pq =
        VanillaPq(images, Denominator::kKirillov, Aggregate::kMacroClass);
    if (!pq) return Fail(std::string(m.name) + ": undefined");
    const double got = *pq * 100.0;
    if (std::abs(got - m.overall) > kTableTolerance + kRoundingSlack) {
      return Fail(std::string(m.name) + Fmt(": %.4f vs %.2f", got, m.overall));
    }
    detail += std::string(detail.empty() ? "" : ", ") + m.name +
              Fmt(" %.4f", got);
  }
  return {true, detail};
}

// --- 3 ----------------------------------------------------------------------

Outcome IdentitySuite() {
  std::vector<PanopticAnnotation> scenes;
  for (int i = 0; i < 50; ++i) {
    scenes.push_back(Scene(1000 + i, 64, 3, 0, 4, "id" + std::to_string(i)));
  }
  const MetricReport r = EvaluateAnnotations(scenes, scenes, MetricConfig{});
  const std::map<std::string, std::optional<double>> values{
      {"PQ", r.aggregate.pq},   {"mPQ+", r.aggregate.mpq_plus},
      {"bPQ", r.aggregate.bpq}, {"iPQ", r.aggregate.ipq},
      {"wPQ", r.aggregate.wpq}, {"fwPQ", r.aggregate.fwpq},
      {"R2", r.aggregate.r2}};
  for (const auto& [name, v] : values) {
    if (!v) return Fail(name + " undefined");
    if (*v != 1.0) return Fail(name + Fmt(" = %.17g", *v));
  }
  return {true, "50 scenes, all seven values exactly 1"};
}

// --- 4 ----------------------------------------------------------------------

Outcome OracleEquivalence() {
  constexpr int kBanks = 10;
  constexpr int kScenes = 20;
  int compared = 0;
  for (int bank = 0; bank < kBanks; ++bank) {
    SplitMix64 rng = SplitMix64(0xacce97).Split(bank);
    std::vector<PanopticAnnotation> gt;
    std::vector<PanopticAnnotation> pred;
    for (int i = 0; i < kScenes; ++i) {
      SceneSpec spec;
      spec.seed = rng.Next();
      spec.width = spec.height = 32;
      spec.num_classes = static_cast<int>(rng.UniformInt(1, 3));
      spec.min_instances = 0;
      spec.max_instances = 3;
      spec.min_radius = 2.0;
      spec.max_radius = 4.5;
      spec.image_id = std::to_string(bank) + "-" + std::to_string(i);
      gt.push_back(GenerateScene(spec));
      pred.push_back(PerturbAll(gt.back(), RandomChain(rng)));
    }
    for (Denominator d : {Denominator::kKirillov, Denominator::kEq1Literal}) {
      for (Aggregate a : {Aggregate::kMacroClass, Aggregate::kMacroImage}) {
        MetricConfig config;
        config.denominator = d;
        config.aggregate = a;
        config.all_aggregates = true;
        const auto problems = oracle::CompareReports(
            EvaluateAnnotations(gt, pred, config),
            oracle::OracleMetrics(gt, pred, config), kOracleTolerance);
        if (!problems.empty()) {
          return Fail("bank " + std::to_string(bank) + " " +
                      std::string(ToString(d)) + "/" +
                      std::string(ToString(a)) + ": " + problems.front());
        }
      }
    }
    compared += kScenes;
  }
  return {true, std::to_string(compared) +
                    " scenes x 4 conventions, tolerance 1e-12"};
}

// --- 5 ----------------------------------------------------------------------

Outcome MatchingConservation() {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SplitMix64 rng = SplitMix64(0x5eed).Split(seed);
    const auto gt = Scene(rng.Next(), 48, 3, 0, 5, "m");
    const auto pred = PerturbAll(gt, RandomChain(rng));
    const auto table = Contingency(gt.label_map, pred.label_map);
    const MatchResult result = ApplyVoidRule(
        MatchSegments(table, gt.segments, pred.segments), table);
    std::map<ClassId, std::int64_t> gt_count;
    std::map<ClassId, std::int64_t> pred_count;
    for (const auto& s : gt.segments) ++gt_count[s.class_id];
    for (const auto& s : pred.segments) ++pred_count[s.class_id];
    std::set<SegmentId> used_gt;
    std::set<SegmentId> used_pred;
    for (const ClassMatch& cm : result.classes) {
      for (const TpPair& tp : cm.tp) {
        if (!used_gt.insert(tp.gt).second || !used_pred.insert(tp.pred).second) {
          return Fail("seed " + std::to_string(seed) + ": segment matched twice");
        }
        if (!(tp.iou > 0.5)) return Fail("TP with IoU <= 0.5");
      }
      const auto tp = static_cast<std::int64_t>(cm.tp.size());
      if (tp + static_cast<std::int64_t>(cm.fn.size()) !=
          gt_count[cm.class_id]) {
        return Fail("seed " + std::to_string(seed) + ": |TP|+|FN| != gt");
      }
      if (tp + static_cast<std::int64_t>(cm.fp.size() + cm.discarded.size()) !=
          pred_count[cm.class_id]) {
        return Fail("seed " + std::to_string(seed) +
                    ": |TP|+|FP|+|discarded| != pred");
      }
    }
    ++checked;
  }
  return {true, std::to_string(checked) + " scenes"};
}

// --- 6 ----------------------------------------------------------------------

bool Near(const std::optional<double>& a, const std::optional<double>& b) {
  return a && b && std::abs(*a - *b) <= kIdentityTolerance;
}

Outcome LimitIdentities() {
  for (int i = 0; i < 20; ++i) {
    SplitMix64 rng = SplitMix64(0x11a17).Split(i);
    const std::string tag = "scene " + std::to_string(i);

    const auto gt = Scene(rng.Next(), 48, 3, 1, 4, tag);
    const std::vector<PanopticAnnotation> g{gt};
    const std::vector<PanopticAnnotation> p{PerturbAll(gt, RandomChain(rng))};

    MetricConfig unit_a;
    unit_a.wpq_a = 1.0;
    const MetricReport ra = EvaluateAnnotations(g, p, unit_a);
    if (!Near(ra.aggregate.wpq, ra.aggregate.pq)) {
      return Fail(tag + ": wPQ(a=1) != PQ");
    }

    MetricConfig full_band;
    full_band.bpq_d = 1.0;
    const MetricReport rb = EvaluateAnnotations(g, p, full_band);
    if (!Near(rb.aggregate.bpq, rb.aggregate.pq)) {
      return Fail(tag + ": bPQ(d=1) != PQ");
    }

    const auto single = Scene(rng.Next(), 48, 1, 1, 5, tag);
    const std::vector<PanopticAnnotation> sg{single};
    std::vector<Perturbation> chain = RandomChain(rng);
    std::erase_if(chain, [](const Perturbation& p) {
      return p.kind == PerturbationKind::kRelabel;
    });
    const std::vector<PanopticAnnotation> sp{PerturbAll(single, chain)};
    const MetricReport rf = EvaluateAnnotations(sg, sp, MetricConfig{});
    if (!Near(rf.aggregate.fwpq, rf.aggregate.pq)) {
      return Fail(tag + ": fwPQ != PQ on one class");
    }

    SceneSpec spaced;
    spaced.seed = rng.Next();
    spaced.num_classes = 3;
    spaced.min_radius = 4.0;
    spaced.max_radius = 6.0;
    spaced.min_gap = 3;
    spaced.image_id = tag;
    const auto base = GenerateScene(spaced);
    const std::vector<PanopticAnnotation> mg{base};
    const std::vector<PanopticAnnotation> mp{
        Perturb(base, {PerturbationKind::kDilate, 1, rng.Next()})};
    const MetricReport rm = EvaluateAnnotations(mg, mp, MetricConfig{});
    if (rm.counts.fp != 0 || rm.counts.fn != 0) {
      return Fail(tag + ": dilated scene has FP or FN");
    }
    if (!Near(rm.aggregate.mpq_plus, rm.aggregate.pq)) {
      return Fail(tag + ": mPQ+ != mean PQ with FP = FN = 0");
    }
  }
  return {true, "20 scenes x 4 identities within 1e-12"};
}

// --- 7 ----------------------------------------------------------------------

Outcome ErosionMonotonicity() {
  std::string detail;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SceneSpec spec;
    spec.seed = 700 + seed;
    spec.num_classes = 3;
    spec.min_instances = 1;
    spec.max_instances = 4;
    spec.min_radius = 1.5;
    spec.max_radius = 2.8;
    spec.image_id = "e" + std::to_string(seed);
    const auto gt = GenerateScene(spec);
    const std::vector<PanopticAnnotation> g{gt};
    std::vector<double> sequence;
    bool erased = false;
    for (int m = 0; m <= 3; ++m) {
      const auto pred =
          Perturb(gt, {PerturbationKind::kErode, static_cast<double>(m), 0});
      const std::vector<PanopticAnnotation> p{pred};
      const MetricReport r = EvaluateAnnotations(g, p, MetricConfig{});
      const double pq = r.aggregate.pq.value_or(-1.0);
      if (!sequence.empty() && pq > sequence.back()) {
        return Fail("seed " + std::to_string(seed) +
                    Fmt(": PQ rose from %.6f to %.6f at magnitude %.0f",
                        sequence.back(), pq, m));
      }
      sequence.push_back(pq);
      if (pred.segments.empty()) {
        erased = true;
        if (pq != 0.0) return Fail("erased prediction scores " + Fmt("%.6f", pq));
      }
    }
    if (!erased) {
      return Fail("seed " + std::to_string(seed) +
                  ": segments survive three erosion steps");
    }
  }
  return {true, "10 seeds, PQ non-increasing over magnitudes 0-3, 0 when erased"};
}

// --- 8 ----------------------------------------------------------------------

Outcome CodecExactness() {
  std::mt19937_64 rng(8);
  IdMap map{1000, 100, {}};
  map.ids.resize(100000);
  for (auto& id : map.ids) id = static_cast<std::uint32_t>(rng() % kPanopticIdLimit);
  map.ids[0] = 0;
  map.ids[1] = kPanopticIdLimit - 1;
  map.ids[99999] = 0;
  const auto bytes = EncodePanopticPng(map);
  const IdMap back = DecodePanopticPng(bytes);
  if (back != map) return Fail("decoded ids differ");
  if (EncodePanopticPng(back) != bytes) return Fail("re-encoding differs");
  return {true, "100000 ids including 0 and 2^24-1"};
}

// --- 9 ----------------------------------------------------------------------

PanopticAnnotation Squares(
    const std::string& id,
    std::initializer_list<std::tuple<int, int, ClassId, SegmentId>> squares) {
  constexpr int kSide = 16;
  std::vector<std::uint32_t> cls(kSide * kSide, 0);
  std::vector<std::uint32_t> inst(kSide * kSide, 0);
  for (const auto& [x0, y0, c, s] : squares) {
    for (int y = y0; y < y0 + 4; ++y) {
      for (int x = x0; x < x0 + 4; ++x) {
        cls[y * kSide + x] = c;
        inst[y * kSide + x] = s;
      }
    }
  }
  return MakeAnnotation(id, LabelMap::Build(cls, inst, kSide, kSide));
}

Outcome IpqNullRule() {
  constexpr ClassId kA = 1;
  constexpr ClassId kB = 2;
  // Image 1: class A has one TP at IoU 0.6 and one FN. Class B only occurs in
  // the prediction. Hand value: 0.6 / (1 + 0.5) = 0.4.
  const auto gt1 = Squares("1", {{1, 1, kA, 1}, {8, 8, kA, 2}});
  const auto pred1 = Squares("1", {{2, 1, kA, 1}, {8, 8, kB, 2}});
  const auto gt2 = Squares("2", {{3, 3, kA, 1}, {9, 2, kB, 2}});
  const std::vector<PanopticAnnotation> gt{gt1, gt2};
  const std::vector<PanopticAnnotation> pred{pred1, gt2};
  const MetricReport r = EvaluateAnnotations(gt, pred, MetricConfig{});
  const ImageReport& first = r.per_image.at(0);
  if (first.image_id != "1") return Fail("unexpected image order");
  if (!first.ipq_score || std::abs(*first.ipq_score - 0.4) > 1e-15) {
    return Fail(Fmt("image 1 score %.17g, expected 0.4",
                    first.ipq_score.value_or(-1)));
  }
  if (first.nulled_fp != 1) return Fail("class-B FP was not nulled");
  if (!r.aggregate.ipq || std::abs(*r.aggregate.ipq - 0.7) > 1e-15) {
    return Fail(Fmt("iPQ %.17g, expected 0.7", r.aggregate.ipq.value_or(-1)));
  }
  return {true, "image 1 = 0.4 (class B null), iPQ = 0.7"};
}

// --- 10 ---------------------------------------------------------------------

Outcome ParallelDeterminism() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("pqsuite-acceptance-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  std::vector<PanopticAnnotation> gt;
  std::vector<PanopticAnnotation> pred;
  SplitMix64 rng(10);
  for (int i = 0; i < 40; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "%04d", i);
    gt.push_back(Scene(rng.Next(), 64, 3, 0, 5, id));
    pred.push_back(PerturbAll(gt.back(), RandomChain(rng)));
  }
  const std::map<ClassId, Category> cats{{1, {1, "a", true, ""}},
                                         {2, {2, "b", true, ""}},
                                         {3, {3, "c", true, ""}}};
  WriteDataset(dir / "gt.json", cats, gt);
  WriteDataset(dir / "pred.json", cats, pred);
  const Dataset g = ReadDataset(dir / "gt.json");
  const Dataset p = ReadDataset(dir / "pred.json");
  MetricConfig config;
  config.all_aggregates = true;
  std::string reference;
  Outcome outcome{true, "40 images, jobs 1/4/16 byte-identical"};
  for (int jobs : {1, 4, 16}) {
    const std::string json =
        ReportToJson(EvaluateDataset(g, p, config, {.jobs = jobs}));
    if (reference.empty()) {
      reference = json;
    } else if (json != reference) {
      outcome = Fail("jobs=" + std::to_string(jobs) + " differs");
      break;
    }
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return outcome;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int Main() {
  const std::vector<Criterion> criteria{
      {1, "table-decomposition", Decomposition},
      {2, "macro-class-consistency", MacroClassConsistency},
      {3, "identity", IdentitySuite},
      {4, "oracle-equivalence", OracleEquivalence},
      {5, "matching-conservation", MatchingConservation},
      {6, "limit-identities", LimitIdentities},
      {7, "erosion-monotonicity", ErosionMonotonicity},
      {8, "codec-exactness", CodecExactness},
      {9, "ipq-null-rule", IpqNullRule},
      {10, "parallel-determinism", ParallelDeterminism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = Fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("%s [%d] %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.number,
                c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace pqsuite::acceptance

int main() { return pqsuite::acceptance::Main(); }
