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

#ifndef PQSUITE_EVALUATE_H_
#define PQSUITE_EVALUATE_H_

#include <span>

#include "pqsuite/panoptic_io.h"
#include "pqsuite/pqmetrics.h"
#include "pqsuite/segmap.h"

namespace pqsuite {

struct EvaluationOptions {
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  int jobs = 1;
  // Strict mode throws Error(kImageSetMismatch) when the gt and pred image
  // sets differ. Lenient mode evaluates gt images without a prediction as
  // empty predictions and ignores extra predictions, with a warning for each.
  bool strict = false;
};

// Resolves 0 to the hardware thread count (at least 1).
int ResolveJobs(int jobs);

// Evaluates every gt image against the pred annotation with the same image
// id. Images are reduced in sorted id order, so the report does not depend
// on `options.jobs`.
MetricReport EvaluateAnnotations(std::span<const PanopticAnnotation> gt,
                                 std::span<const PanopticAnnotation> pred,
                                 const MetricConfig& config,
                                 const EvaluationOptions& options = {},
                                 const std::map<ClassId, Category>& categories = {});

// Same over two on-disk datasets. Images whose PNG cannot be loaded are listed
// in `failures` and left out of the aggregates.
MetricReport EvaluateDataset(const Dataset& gt, const Dataset& pred,
                             const MetricConfig& config,
                             const EvaluationOptions& options = {});

}  // namespace pqsuite

#endif  // PQSUITE_EVALUATE_H_
