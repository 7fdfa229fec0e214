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

#include "pqsuite/evaluate.h"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pqsuite/error.h"

namespace pqsuite {
namespace {

// Runs task(i) for i in [0, n) on up to `jobs` threads.
void ParallelFor(std::size_t n, int jobs,
                 const std::function<void(std::size_t)>& task) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

struct Alignment {
  std::vector<std::string> ids;  // gt image ids, sorted
  std::vector<std::string> warnings;
};

Alignment AlignImageSets(const std::set<std::string>& gt_ids,
                         const std::set<std::string>& pred_ids, bool strict) {
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  std::set_difference(gt_ids.begin(), gt_ids.end(), pred_ids.begin(),
                      pred_ids.end(), std::back_inserter(missing));
  std::set_difference(pred_ids.begin(), pred_ids.end(), gt_ids.begin(),
                      gt_ids.end(), std::back_inserter(extra));
  if (strict && (!missing.empty() || !extra.empty())) {
    std::string msg = std::to_string(missing.size()) +
                      " gt image(s) without prediction, " +
                      std::to_string(extra.size()) +
                      " prediction(s) without gt";
    if (!missing.empty()) msg += "; first missing: " + missing.front();
    if (!extra.empty()) msg += "; first extra: " + extra.front();
    throw Error(ErrorCode::kImageSetMismatch, msg);
  }
  Alignment a;
  a.ids.assign(gt_ids.begin(), gt_ids.end());
  for (const std::string& id : missing) {
    a.warnings.push_back("image " + id +
                         " has no prediction; scored as empty prediction");
  }
  for (const std::string& id : extra) {
    a.warnings.push_back("prediction for unknown image " + id + " ignored");
  }
  return a;
}

// Shared driver: `evaluate(i)` returns the evaluation of ids[i] or throws.
MetricReport Run(const Alignment& alignment, const MetricConfig& config,
                 const EvaluationOptions& options,
                 const std::map<ClassId, Category>& categories,
                 const std::function<ImageEvaluation(const std::string&)>&
                     evaluate) {
  config.Check();
  const std::size_t n = alignment.ids.size();
  std::vector<std::optional<ImageEvaluation>> results(n);
  std::vector<std::string> errors(n);
  ParallelFor(n, ResolveJobs(options.jobs), [&](std::size_t i) {
    try {
      results[i] = evaluate(alignment.ids[i]);
    } catch (const std::exception& e) {
      errors[i] = alignment.ids[i] + ": " + e.what();
    }
  });

  std::vector<ImageEvaluation> evaluations;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i]) {
      evaluations.push_back(std::move(*results[i]));
    } else {
      failures.push_back(errors[i]);
    }
  }
  if (evaluations.empty()) {
    throw Error(ErrorCode::kEmptyDataset,
                failures.empty() ? "no images to evaluate"
                                 : "every image failed; first: " +
                                       failures.front());
  }
  MetricReport report = BuildReport(evaluations, config, categories);
  report.warnings.insert(report.warnings.begin(), alignment.warnings.begin(),
                         alignment.warnings.end());
  report.failures = std::move(failures);
  return report;
}

}  // namespace

int ResolveJobs(int jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

MetricReport EvaluateAnnotations(std::span<const PanopticAnnotation> gt,
                                 std::span<const PanopticAnnotation> pred,
                                 const MetricConfig& config,
                                 const EvaluationOptions& options,
                                 const std::map<ClassId, Category>& categories) {
  std::map<std::string, const PanopticAnnotation*> gt_by_id;
  std::map<std::string, const PanopticAnnotation*> pred_by_id;
  for (const PanopticAnnotation& a : gt) {
    if (!gt_by_id.emplace(a.image_id, &a).second) {
      throw Error(ErrorCode::kInvariantViolation,
                  "duplicate gt image id " + a.image_id);
    }
  }
  for (const PanopticAnnotation& a : pred) {
    if (!pred_by_id.emplace(a.image_id, &a).second) {
      throw Error(ErrorCode::kInvariantViolation,
                  "duplicate pred image id " + a.image_id);
    }
  }
  std::set<std::string> gt_ids;
  std::set<std::string> pred_ids;
  for (const auto& [id, a] : gt_by_id) gt_ids.insert(id);
  for (const auto& [id, a] : pred_by_id) pred_ids.insert(id);
  const Alignment alignment = AlignImageSets(gt_ids, pred_ids, options.strict);

  return Run(alignment, config, options, categories,
             [&](const std::string& id) {
               const PanopticAnnotation& g = *gt_by_id.at(id);
               auto it = pred_by_id.find(id);
               if (it == pred_by_id.end()) {
                 PanopticAnnotation empty;
                 empty.image_id = id;
                 return EvaluateImage(g, empty, config);
               }
               return EvaluateImage(g, *it->second, config);
             });
}

MetricReport EvaluateDataset(const Dataset& gt, const Dataset& pred,
                             const MetricConfig& config,
                             const EvaluationOptions& options) {
  std::set<std::string> gt_ids;
  std::set<std::string> pred_ids;
  for (const AnnotationEntry& e : gt.manifest.annotations) gt_ids.insert(e.image_id);
  for (const AnnotationEntry& e : pred.manifest.annotations) {
    pred_ids.insert(e.image_id);
  }
  const Alignment alignment = AlignImageSets(gt_ids, pred_ids, options.strict);

  return Run(alignment, config, options, gt.manifest.categories,
             [&](const std::string& id) {
               const PanopticAnnotation g =
                   LoadAnnotation(gt.manifest, gt.png_root, id);
               if (!pred_ids.contains(id)) {
                 PanopticAnnotation empty;
                 empty.image_id = id;
                 return EvaluateImage(g, empty, config);
               }
               const PanopticAnnotation p =
                   LoadAnnotation(pred.manifest, pred.png_root, id);
               return EvaluateImage(g, p, config);
             });
}

}  // namespace pqsuite
