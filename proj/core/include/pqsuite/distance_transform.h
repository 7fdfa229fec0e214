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

#ifndef PQSUITE_DISTANCE_TRANSFORM_H_
#define PQSUITE_DISTANCE_TRANSFORM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace pqsuite {

// Returned for pixels when the grid has no feature pixel at all.
inline constexpr std::int64_t kNoFeature = INT64_C(1) << 62;

// Exact squared Euclidean distance from every pixel to the nearest pixel with
// is_feature != 0 (Felzenszwalb-Huttenlocher lower envelope, two passes).
std::vector<std::int64_t> SquaredEdt(std::span<const std::uint8_t> is_feature,
                                     int width, int height);

}  // namespace pqsuite

#endif  // PQSUITE_DISTANCE_TRANSFORM_H_
