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

#ifndef PQSUITE_TOOLS_SELFTEST_H_
#define PQSUITE_TOOLS_SELFTEST_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pqsuite/segmap.h"
#include "pqsuite/synth.h"

namespace pqsuite::tools {

// Random chain of one to three perturbations of any kind.
std::vector<Perturbation> RandomPerturbations(SplitMix64& rng);
std::string DescribePerturbations(const std::vector<Perturbation>& chain);

struct SceneBank {
  std::uint64_t seed = 0;
  std::vector<PanopticAnnotation> gt;
  std::vector<PanopticAnnotation> pred;
  std::vector<std::string> perturbations;  // one description per scene
};

// `scenes` seeded side x side scenes with up to three classes, each paired
// with a randomly perturbed prediction. Image ids are "<seed>-<index>".
SceneBank MakeSceneBank(std::uint64_t seed, int scenes, int side = 32);

// A 4x4 gt square and a prediction covering its top half: IoU exactly 0.5,
// which must stay unmatched under the strict threshold.
PanopticAnnotation ThresholdFixtureGt();
PanopticAnnotation ThresholdFixturePred();

struct SelftestOptions {
  int seeds = 10;
  int scenes_per_seed = 20;
  bool fault_inclusive_threshold = false;
};

// Identity, oracle-equivalence, conservation, band and determinism checks.
// Prints one PASS/FAIL line per property; returns true iff all pass.
bool RunSelftest(const SelftestOptions& options, std::ostream& out);

}  // namespace pqsuite::tools

#endif  // PQSUITE_TOOLS_SELFTEST_H_
