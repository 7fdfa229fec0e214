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

#include "pqsuite/distance_transform.h"

#include <limits>

#include "pqsuite/error.h"

namespace pqsuite {
namespace {

// Finite stand-in for infinity; large enough that no real squared distance
// reaches it, small enough that sums stay finite.
constexpr double kFar = 1e20;

// Abscissa where the parabolas rooted at q and r intersect.
double Intersect(const double* f, int q, int r) {
  return ((f[q] + static_cast<double>(q) * q) -
          (f[r] + static_cast<double>(r) * r)) /
         (2.0 * (q - r));
}

void Transform1d(const double* f, int n, double* d, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = Intersect(f, q, v[k]);
    while (s <= z[k]) {
      --k;
      s = Intersect(f, q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = static_cast<double>(q - v[k]);
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<std::int64_t> SquaredEdt(std::span<const std::uint8_t> is_feature,
                                     int width, int height) {
  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (is_feature.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "feature grid size mismatch");
  }
  std::vector<std::int64_t> out(n, kNoFeature);
  if (n == 0) return out;

  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = is_feature[i] ? 0.0 : kFar;

  const int longest = width > height ? width : height;
  std::vector<double> f(static_cast<std::size_t>(longest));
  std::vector<double> d(static_cast<std::size_t>(longest));
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);

  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      f[y] = grid[static_cast<std::size_t>(y) * width + x];
    }
    Transform1d(f.data(), height, d.data(), v.data(), z.data());
    for (int y = 0; y < height; ++y) {
      grid[static_cast<std::size_t>(y) * width + x] = d[y];
    }
  }
  for (int y = 0; y < height; ++y) {
    double* row = grid.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) f[x] = row[x];
    Transform1d(f.data(), width, row, v.data(), z.data());
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (grid[i] < kFar / 2) out[i] = static_cast<std::int64_t>(grid[i]);
  }
  return out;
}

}  // namespace pqsuite
