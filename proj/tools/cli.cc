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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pqsuite/color.h"
#include "pqsuite/error.h"
#include "pqsuite/evaluate.h"
#include "pqsuite/oracle/oracle.h"
#include "pqsuite/panoptic_io.h"
#include "pqsuite/png_codec.h"
#include "pqsuite/pqmetrics.h"
#include "pqsuite/report.h"
#include "pqsuite/synth.h"
#include "selftest.h"

namespace pqsuite::tools {
namespace {

namespace fs = std::filesystem;

constexpr double kOracleTolerance = 1e-12;

struct EvaluateArgs {
  std::string gt;
  std::string pred;
  std::string gt_png_root;
  std::string pred_png_root;
  std::string config_path;
  std::string metrics;
  double bpq_d = 0.02;
  double wpq_a = 10.0;
  double wpq_d = 0.02;
  std::string denominator;
  std::string aggregate;
  bool all_aggregates = false;
  std::string bpq_mode;
  std::string frequency_basis;
  double match_threshold = 0.5;
  double void_threshold = 0.5;
  bool subtract_void = false;
  std::string format = "json";
  std::string out;
  int jobs = 0;
  bool strict = false;
  bool verify_oracle = false;
  bool no_timestamp = false;
  bool quiet = false;
};

struct ConvertArgs {
  std::string masks;
  std::string categories;
  std::string out;
};

struct VisualizeArgs {
  std::string gt;
  std::string pred;
  std::vector<std::string> images;
  std::uint64_t seed = 0;
  std::string out;
  bool contours = false;
  int separator = 4;
};

struct SynthArgs {
  std::string out;
  int images = 10;
  std::uint64_t seed = 0;
  int width = 64;
  int height = 64;
  int classes = 2;
  int min_instances = 1;
  int max_instances = 3;
  double min_radius = 2.0;
  double max_radius = 5.0;
  int min_gap = 1;
  std::vector<std::string> perturb;
  bool random_perturbations = false;
};

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string ReadText(const fs::path& path) {
  const auto bytes = ReadFileBytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void WriteText(const fs::path& path, const std::string& text) {
  WriteFileBytes(path, std::span<const std::uint8_t>(
                           reinterpret_cast<const std::uint8_t*>(text.data()),
                           text.size()));
}

int JobsFromEnvironment() {
  const char* env = std::getenv("PQSUITE_JOBS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const int jobs = std::stoi(env, &used);
    if (used == std::string(env).size() && jobs >= 0) return jobs;
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::kInvalidParameter,
              std::string("PQSUITE_JOBS must be a non-negative integer, got '") +
                  env + "'");
}

MetricConfig ResolveConfig(const EvaluateArgs& a, const CLI::App& cmd) {
  MetricConfig c;
  if (!a.config_path.empty()) c = ConfigFromJson(ReadText(a.config_path));
  auto given = [&cmd](const char* flag) { return cmd.count(flag) > 0; };
  if (given("--metrics")) c.metrics = ParseMetricList(a.metrics);
  if (given("--bpq-d")) c.bpq_d = a.bpq_d;
  if (given("--wpq-a")) c.wpq_a = a.wpq_a;
  if (given("--wpq-d")) c.wpq_d = a.wpq_d;
  if (given("--denominator")) c.denominator = ParseDenominator(a.denominator);
  if (given("--aggregate")) c.aggregate = ParseAggregate(a.aggregate);
  if (given("--all-aggregates")) c.all_aggregates = true;
  if (given("--bpq-mode")) c.bpq_mode = ParseBpqMode(a.bpq_mode);
  if (given("--frequency-basis")) {
    c.frequency_basis = ParseFrequencyBasis(a.frequency_basis);
  }
  if (given("--match-threshold")) c.match_threshold = a.match_threshold;
  if (given("--void-threshold")) c.void_fraction_threshold = a.void_threshold;
  if (given("--subtract-void")) c.subtract_void_from_iou = true;
  c.Check();
  return c;
}

std::vector<PanopticAnnotation> LoadAll(const Dataset& d,
                                        const std::vector<std::string>& ids) {
  std::vector<PanopticAnnotation> out;
  for (const std::string& id : ids) {
    out.push_back(LoadAnnotation(d.manifest, d.png_root, id));
  }
  return out;
}

int CmdEvaluate(const EvaluateArgs& a, const CLI::App& cmd, std::ostream& out,
                std::ostream& err) {
  const MetricConfig config = ResolveConfig(a, cmd);
  if (a.format != "json" && a.format != "csv") {
    throw Error(ErrorCode::kInvalidParameter,
                "--format must be json or csv, got " + a.format);
  }
  EvaluationOptions options;
  options.jobs = cmd.count("--jobs") > 0 ? a.jobs : JobsFromEnvironment();
  options.strict = a.strict;

  const Dataset gt = ReadDataset(
      a.gt, a.gt_png_root.empty() ? std::nullopt
                                  : std::optional<fs::path>(a.gt_png_root));
  const Dataset pred = ReadDataset(
      a.pred, a.pred_png_root.empty()
                  ? std::nullopt
                  : std::optional<fs::path>(a.pred_png_root));
  MetricReport report = EvaluateDataset(gt, pred, config, options);
  if (!a.no_timestamp) report.timestamp = Timestamp();

  int status = kExitOk;
  if (a.verify_oracle) {
    std::vector<std::string> gt_ids;
    std::vector<std::string> pred_ids;
    for (const auto& e : gt.manifest.annotations) gt_ids.push_back(e.image_id);
    for (const auto& e : pred.manifest.annotations) {
      pred_ids.push_back(e.image_id);
    }
    const auto diffs = oracle::CompareReports(
        report,
        oracle::OracleMetrics(LoadAll(gt, gt_ids), LoadAll(pred, pred_ids),
                              config),
        kOracleTolerance);
    if (diffs.empty()) {
      err << "oracle: report matches the brute-force oracle\n";
    } else {
      err << "oracle: " << diffs.size() << " mismatch(es)\n";
      for (const std::string& d : diffs) err << "  " << d << "\n";
      status = kExitFailure;
    }
  }

  const std::string text =
      a.format == "csv" ? ReportToCsv(report) : ReportToJson(report);
  if (a.out.empty()) {
    out << text;
    if (!a.quiet) err << ReportToTable(report);
  } else {
    WriteText(a.out, text);
    if (!a.quiet) out << ReportToTable(report);
  }
  for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
  for (const std::string& f : report.failures) err << "failed: " << f << "\n";
  if (!report.failures.empty()) status = kExitFailure;
  return status;
}

int CmdConvert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  const CategoryMapping mapping = ParseCategoryMapping(ReadText(a.categories));
  const fs::path class_dir = fs::path(a.masks) / "class";
  const fs::path instance_dir = fs::path(a.masks) / "instance";
  if (!fs::is_directory(class_dir)) {
    throw Error(ErrorCode::kMissingFile,
                class_dir.string() + " is not a directory");
  }
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(class_dir)) {
    if (entry.path().extension() == ".png") inputs.push_back(entry.path());
  }
  std::sort(inputs.begin(), inputs.end());

  std::vector<PanopticAnnotation> converted;
  std::vector<std::string> failures;
  for (const fs::path& class_png : inputs) {
    const std::string name = class_png.stem().string();
    try {
      const GrayImage cls = DecodeGrayPng(ReadFileBytes(class_png));
      const GrayImage inst =
          DecodeGrayPng(ReadFileBytes(instance_dir / class_png.filename()));
      converted.push_back(IngestMaskPair(cls, inst, mapping, name));
    } catch (const std::exception& e) {
      failures.push_back(name + ": " + e.what());
    }
  }
  if (inputs.empty()) failures.push_back("no class PNGs under " +
                                         class_dir.string());
  const fs::path json = fs::path(a.out) / "panoptic.json";
  WriteDataset(json, mapping.categories, converted);
  out << "converted " << converted.size() << " image(s) to " << json.string()
      << "\n";
  for (const std::string& f : failures) err << "failed: " << f << "\n";
  return failures.empty() ? kExitOk : kExitFailure;
}

int CmdVisualize(const VisualizeArgs& a, std::ostream& out) {
  const Dataset gt = ReadDataset(a.gt);
  std::optional<Dataset> pred;
  if (!a.pred.empty()) pred = ReadDataset(a.pred);
  std::vector<std::string> ids = a.images;
  if (ids.empty()) {
    for (const auto& e : gt.manifest.annotations) ids.push_back(e.image_id);
  }
  RenderOptions options;
  options.contours = a.contours;
  for (const std::string& id : ids) {
    RgbImage image = RenderVisualization(
        LoadAnnotation(gt.manifest, gt.png_root, id), a.seed, options);
    if (pred) {
      image = ComposeSideBySide(
          image,
          RenderVisualization(LoadAnnotation(pred->manifest, pred->png_root, id),
                              a.seed, options),
          a.separator);
    }
    const fs::path path = fs::path(a.out) / (id + ".png");
    WriteFileBytes(path, EncodeRgbPng(image));
    out << path.string() << "\n";
  }
  return kExitOk;
}

int CmdSynth(const SynthArgs& a, std::ostream& out) {
  std::vector<Perturbation> fixed;
  for (const std::string& p : a.perturb) fixed.push_back(ParsePerturbation(p));
  std::map<ClassId, Category> categories;
  for (int c = 1; c <= a.classes; ++c) {
    Category cat;
    cat.id = static_cast<ClassId>(c);
    cat.name = "class_" + std::to_string(c);
    categories[cat.id] = cat;
  }
  const SplitMix64 root(a.seed);
  std::vector<PanopticAnnotation> gt;
  std::vector<PanopticAnnotation> pred;
  const int digits = std::max<int>(4, std::to_string(a.images).size());
  for (int i = 0; i < a.images; ++i) {
    SplitMix64 rng = root.Split(static_cast<std::uint64_t>(i));
    SceneSpec spec;
    spec.seed = rng.Next();
    spec.width = a.width;
    spec.height = a.height;
    spec.num_classes = a.classes;
    spec.min_instances = a.min_instances;
    spec.max_instances = a.max_instances;
    spec.min_radius = a.min_radius;
    spec.max_radius = a.max_radius;
    spec.min_gap = a.min_gap;
    std::string id = std::to_string(i);
    spec.image_id = std::string(digits - id.size(), '0') + id;
    PanopticAnnotation scene = GenerateScene(spec);
    std::vector<Perturbation> chain = fixed;
    for (Perturbation& p : chain) p.seed ^= rng.Next();
    if (a.random_perturbations) {
      const auto extra = RandomPerturbations(rng);
      chain.insert(chain.end(), extra.begin(), extra.end());
    }
    pred.push_back(PerturbAll(scene, chain));
    gt.push_back(std::move(scene));
  }
  WriteDataset(fs::path(a.out) / "gt.json", categories, gt);
  WriteDataset(fs::path(a.out) / "pred.json", categories, pred);
  out << "wrote " << a.images << " scene(s) to " << a.out << "\n";
  return kExitOk;
}

// Maps library errors to exit codes.
int Guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidParameter ? kExitUsage
                                                    : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Panoptic quality evaluation toolkit", "pqsuite"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a prediction dataset against gt");
  evaluate->add_option("--gt", ev.gt, "Ground-truth COCO panoptic JSON")
      ->required();
  evaluate->add_option("--pred", ev.pred, "Prediction COCO panoptic JSON")
      ->required();
  evaluate->add_option("--gt-png-root", ev.gt_png_root,
                       "Directory of gt PNGs (default: next to the JSON)");
  evaluate->add_option("--pred-png-root", ev.pred_png_root,
                       "Directory of prediction PNGs");
  evaluate->add_option("--config", ev.config_path,
                       "Metric config JSON (a report's config block works)");
  evaluate->add_option("--metrics", ev.metrics,
                       "Comma list of pq,mpq+,bpq,ipq,wpq,fwpq,r2");
  evaluate->add_option("--bpq-d", ev.bpq_d, "bPQ band as a diagonal fraction");
  evaluate->add_option("--wpq-a", ev.wpq_a, "wPQ boundary importance factor");
  evaluate->add_option("--wpq-d", ev.wpq_d, "wPQ band as a diagonal fraction");
  evaluate->add_option("--denominator", ev.denominator, "kirillov|eq1");
  evaluate->add_option("--aggregate", ev.aggregate, "class|image");
  evaluate->add_flag("--all-aggregates", ev.all_aggregates,
                     "Report both aggregation conventions");
  evaluate->add_option("--bpq-mode", ev.bpq_mode, "boundary|min");
  evaluate->add_option("--frequency-basis", ev.frequency_basis,
                       "fwPQ class weights: pixels|instances");
  evaluate->add_option("--match-threshold", ev.match_threshold,
                       "IoU a TP must exceed");
  evaluate->add_option("--void-threshold", ev.void_threshold,
                       "Void share above which an FP is discarded");
  evaluate->add_flag("--subtract-void", ev.subtract_void,
                     "Drop a prediction's void pixels from the IoU union");
  evaluate->add_option("--format", ev.format, "Report format: json|csv");
  evaluate->add_option("--out", ev.out, "Report path (default: stdout)");
  evaluate->add_option("--jobs", ev.jobs,
                       "Worker threads (0 = all cores, env PQSUITE_JOBS)");
  evaluate->add_flag("--strict", ev.strict,
                     "Fail when the image sets differ");
  evaluate->add_flag("--verify-oracle", ev.verify_oracle,
                     "Recompute with the brute-force oracle and compare");
  evaluate->add_flag("--no-timestamp", ev.no_timestamp,
                     "Omit the timestamp from the report");
  evaluate->add_flag("--quiet", ev.quiet, "Do not print the summary table");

  ConvertArgs cv;
  CLI::App* convert = app.add_subcommand(
      "convert", "Convert class/instance mask pairs to COCO panoptic");
  convert->add_option("--masks", cv.masks,
                      "Root holding class/<name>.png and instance/<name>.png")
      ->required();
  convert->add_option("--categories", cv.categories, "Category mapping JSON")
      ->required();
  convert->add_option("--out", cv.out,
                      "Output root (panoptic.json + panoptic/)")
      ->required();

  VisualizeArgs vz;
  CLI::App* visualize =
      app.add_subcommand("visualize", "Render panoptic annotations to RGB");
  visualize->add_option("--gt", vz.gt, "COCO panoptic JSON")->required();
  visualize->add_option("--pred", vz.pred,
                        "Prediction JSON for side-by-side panels");
  visualize->add_option("--image", vz.images, "Image id (repeatable)");
  visualize->add_option("--seed", vz.seed, "Palette seed");
  visualize->add_option("--out", vz.out, "Output directory")->required();
  visualize->add_flag("--contours", vz.contours, "Outline segments");
  visualize->add_option("--separator", vz.separator,
                        "Separator width in pixels");

  SynthArgs sy;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate seeded gt/prediction datasets");
  synth->add_option("--out", sy.out, "Output directory")->required();
  synth->add_option("--images", sy.images, "Number of scenes");
  synth->add_option("--seed", sy.seed, "Dataset seed");
  synth->add_option("--width", sy.width, "Frame width");
  synth->add_option("--height", sy.height, "Frame height");
  synth->add_option("--classes", sy.classes, "Number of classes");
  synth->add_option("--min-instances", sy.min_instances, "Per class");
  synth->add_option("--max-instances", sy.max_instances, "Per class");
  synth->add_option("--min-radius", sy.min_radius, "Blob radius");
  synth->add_option("--max-radius", sy.max_radius, "Blob radius");
  synth->add_option("--min-gap", sy.min_gap, "Pixels between blobs");
  synth->add_option("--perturb", sy.perturb,
                    "kind:magnitude[:seed] applied to predictions");
  synth->add_flag("--random-perturbations", sy.random_perturbations,
                  "Append a random perturbation chain per scene");

  SelftestOptions st;
  CLI::App* selftest =
      app.add_subcommand("selftest", "Oracle-equivalence and identity suites");
  selftest->add_option("--seeds", st.seeds, "Seed banks to exercise")
      ->check(CLI::PositiveNumber);
  selftest->add_option("--scenes", st.scenes_per_seed, "Scenes per seed bank")
      ->check(CLI::PositiveNumber);
  selftest->add_flag("--fault-inclusive-threshold",
                     st.fault_inclusive_threshold)
      ->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (evaluate->parsed()) {
    return Guarded([&] { return CmdEvaluate(ev, *evaluate, out, err); }, err);
  }
  if (convert->parsed()) {
    return Guarded([&] { return CmdConvert(cv, out, err); }, err);
  }
  if (visualize->parsed()) {
    return Guarded([&] { return CmdVisualize(vz, out); }, err);
  }
  if (synth->parsed()) {
    return Guarded([&] { return CmdSynth(sy, out); }, err);
  }
  return Guarded(
      [&] { return RunSelftest(st, out) ? kExitOk : kExitFailure; }, err);
}

}  // namespace pqsuite::tools
