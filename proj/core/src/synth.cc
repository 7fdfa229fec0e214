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

#include "pqsuite/synth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "pqsuite/error.h"

namespace pqsuite {
namespace {

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Mutable copy of a label map's two planes.
struct Canvas {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> cls;
  std::vector<std::uint32_t> inst;

  explicit Canvas(const LabelMap& map)
      : width(map.width()),
        height(map.height()),
        cls(map.class_plane().begin(), map.class_plane().end()),
        inst(map.instance_plane().begin(), map.instance_plane().end()) {}

  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  bool Inside(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height;
  }
  bool IsVoid(std::size_t i) const { return cls[i] == 0 && inst[i] == 0; }
  void Clear(std::size_t i) {
    cls[i] = kVoidClass;
    inst[i] = kNoInstance;
  }

  SegmentId MaxId() const {
    SegmentId m = 0;
    for (std::uint32_t v : inst) m = std::max(m, v);
    return m;
  }

  // Segment id -> class id, in id order.
  std::map<SegmentId, ClassId> Segments() const {
    std::map<SegmentId, ClassId> out;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (inst[i] != kNoInstance) out.emplace(inst[i], cls[i]);
    }
    return out;
  }

  PanopticAnnotation Finish(const std::string& image_id) const {
    return MakeAnnotation(image_id,
                          LabelMap::Build(cls, inst, width, height));
  }
};

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

// Pixels of the disk of radius r centred at (cx, cy), pixel-centre test.
std::vector<std::pair<int, int>> Disk(double cx, double cy, double r) {
  std::vector<std::pair<int, int>> px;
  const int x0 = static_cast<int>(std::floor(cx - r));
  const int x1 = static_cast<int>(std::ceil(cx + r));
  const int y0 = static_cast<int>(std::floor(cy - r));
  const int y1 = static_cast<int>(std::ceil(cy + r));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      if (dx * dx + dy * dy <= r * r) px.emplace_back(x, y);
    }
  }
  return px;
}

// Candidate disk fully inside the frame, or empty when it cannot fit.
std::vector<std::pair<int, int>> RandomDisk(SplitMix64& rng, int width,
                                            int height, double r) {
  if (2.0 * r > width || 2.0 * r > height) return {};
  const double cx = r + rng.Uniform() * (width - 2.0 * r);
  const double cy = r + rng.Uniform() * (height - 2.0 * r);
  auto px = Disk(cx, cy, r);
  std::erase_if(px, [&](const auto& p) {
    return p.first < 0 || p.second < 0 || p.first >= width ||
           p.second >= height;
  });
  return px;
}

void Erode(Canvas& c, int steps) {
  for (int s = 0; s < steps; ++s) {
    std::vector<std::size_t> removed;
    for (int y = 0; y < c.height; ++y) {
      for (int x = 0; x < c.width; ++x) {
        const std::size_t i = c.Index(x, y);
        if (c.inst[i] == kNoInstance) continue;
        for (int k = 0; k < 4; ++k) {
          const int nx = x + kDx[k];
          const int ny = y + kDy[k];
          if (!c.Inside(nx, ny) || c.inst[c.Index(nx, ny)] != c.inst[i]) {
            removed.push_back(i);
            break;
          }
        }
      }
    }
    if (removed.empty()) return;
    for (std::size_t i : removed) c.Clear(i);
  }
}

void Dilate(Canvas& c, int steps) {
  for (int s = 0; s < steps; ++s) {
    std::vector<std::pair<std::size_t, std::size_t>> grown;  // (pixel, source)
    for (int y = 0; y < c.height; ++y) {
      for (int x = 0; x < c.width; ++x) {
        const std::size_t i = c.Index(x, y);
        if (!c.IsVoid(i)) continue;
        SegmentId best = std::numeric_limits<SegmentId>::max();
        std::size_t source = 0;
        for (int k = 0; k < 4; ++k) {
          const int nx = x + kDx[k];
          const int ny = y + kDy[k];
          if (!c.Inside(nx, ny)) continue;
          const std::size_t j = c.Index(nx, ny);
          if (c.inst[j] != kNoInstance && c.inst[j] < best) {
            best = c.inst[j];
            source = j;
          }
        }
        if (best != std::numeric_limits<SegmentId>::max()) {
          grown.emplace_back(i, source);
        }
      }
    }
    if (grown.empty()) return;
    for (const auto& [i, j] : grown) {
      c.inst[i] = c.inst[j];
      c.cls[i] = c.cls[j];
    }
  }
}

void Shift(Canvas& c, int px, const SplitMix64& base) {
  Canvas out = c;
  for (std::size_t i = 0; i < out.inst.size(); ++i) {
    if (out.inst[i] != kNoInstance) out.Clear(i);
  }
  std::map<SegmentId, int> direction;
  for (const auto& [id, cls] : c.Segments()) {
    direction[id] = static_cast<int>(base.Split(id).UniformInt(0, 3));
  }
  // Higher ids first so lower ids win overlaps.
  for (auto it = direction.rbegin(); it != direction.rend(); ++it) {
    const auto [id, dir] = *it;
    for (int y = 0; y < c.height; ++y) {
      for (int x = 0; x < c.width; ++x) {
        const std::size_t i = c.Index(x, y);
        if (c.inst[i] != id) continue;
        const int nx = x + kDx[dir] * px;
        const int ny = y + kDy[dir] * px;
        if (!c.Inside(nx, ny)) continue;
        const std::size_t j = out.Index(nx, ny);
        out.inst[j] = id;
        out.cls[j] = c.cls[i];
      }
    }
  }
  c = std::move(out);
}

struct Extent {
  int x0 = std::numeric_limits<int>::max();
  int y0 = std::numeric_limits<int>::max();
  int x1 = std::numeric_limits<int>::min();
  int y1 = std::numeric_limits<int>::min();
  double sx = 0.0;
  double sy = 0.0;
  std::int64_t n = 0;
};

std::map<SegmentId, Extent> Extents(const Canvas& c) {
  std::map<SegmentId, Extent> out;
  for (int y = 0; y < c.height; ++y) {
    for (int x = 0; x < c.width; ++x) {
      const SegmentId id = c.inst[c.Index(x, y)];
      if (id == kNoInstance) continue;
      Extent& e = out[id];
      e.x0 = std::min(e.x0, x);
      e.y0 = std::min(e.y0, y);
      e.x1 = std::max(e.x1, x);
      e.y1 = std::max(e.y1, y);
      e.sx += x;
      e.sy += y;
      ++e.n;
    }
  }
  return out;
}

void Split(Canvas& c, double p, const SplitMix64& base) {
  SegmentId next = c.MaxId() + 1;
  for (const auto& [id, e] : Extents(c)) {
    SplitMix64 rng = base.Split(id);
    if (!rng.Bernoulli(p)) continue;
    const bool vertical_cut = (e.x1 - e.x0) >= (e.y1 - e.y0);
    const int cut = vertical_cut ? (e.x0 + e.x1 + 1) / 2 : (e.y0 + e.y1 + 1) / 2;
    if (vertical_cut ? e.x1 == e.x0 : e.y1 == e.y0) continue;
    const SegmentId fresh = next++;
    for (int y = e.y0; y <= e.y1; ++y) {
      for (int x = e.x0; x <= e.x1; ++x) {
        const std::size_t i = c.Index(x, y);
        if (c.inst[i] == id && (vertical_cut ? x >= cut : y >= cut)) {
          c.inst[i] = fresh;
        }
      }
    }
  }
}

void Merge(Canvas& c, double p, const SplitMix64& base) {
  const auto extents = Extents(c);
  const auto segments = c.Segments();
  std::map<SegmentId, SegmentId> target;  // absorbed -> absorber
  std::set<SegmentId> gone;  // absorbed or absorbing
  for (const auto& [id, e] : extents) {
    if (gone.contains(id)) continue;
    SplitMix64 rng = base.Split(id);
    if (!rng.Bernoulli(p)) continue;
    const double cx = e.sx / static_cast<double>(e.n);
    const double cy = e.sy / static_cast<double>(e.n);
    SegmentId nearest = kNoInstance;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [other, f] : extents) {
      if (other == id || gone.contains(other) ||
          segments.at(other) != segments.at(id)) {
        continue;
      }
      const double dx = f.sx / static_cast<double>(f.n) - cx;
      const double dy = f.sy / static_cast<double>(f.n) - cy;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        nearest = other;
      }
    }
    if (nearest == kNoInstance) continue;
    target[nearest] = id;
    gone.insert(nearest);
    gone.insert(id);
  }
  for (std::uint32_t& v : c.inst) {
    if (auto it = target.find(v); it != target.end()) v = it->second;
  }
}

void Drop(Canvas& c, double p, const SplitMix64& base) {
  std::set<SegmentId> dropped;
  for (const auto& [id, cls] : c.Segments()) {
    SplitMix64 rng = base.Split(id);
    if (rng.Bernoulli(p)) dropped.insert(id);
  }
  for (std::size_t i = 0; i < c.inst.size(); ++i) {
    if (dropped.contains(c.inst[i])) c.Clear(i);
  }
}

ClassId MaxClass(const Canvas& c) {
  ClassId m = 0;
  for (const auto& [id, cls] : c.Segments()) m = std::max(m, cls);
  return std::max<ClassId>(m, 1);
}

void Spurious(Canvas& c, int count, const SplitMix64& base) {
  const ClassId max_class = MaxClass(c);
  SegmentId next = c.MaxId() + 1;
  for (int b = 0; b < count; ++b) {
    SplitMix64 rng = base.Split(static_cast<std::uint64_t>(b));
    const ClassId cls = static_cast<ClassId>(rng.UniformInt(1, max_class));
    for (int attempt = 0; attempt < 50; ++attempt) {
      const double r = 1.5 + 2.5 * rng.Uniform();
      const auto px = RandomDisk(rng, c.width, c.height, r);
      if (px.empty()) continue;
      const bool free = std::all_of(px.begin(), px.end(), [&](const auto& q) {
        return c.IsVoid(c.Index(q.first, q.second));
      });
      if (!free) continue;
      const SegmentId id = next++;
      for (const auto& [x, y] : px) {
        c.inst[c.Index(x, y)] = id;
        c.cls[c.Index(x, y)] = cls;
      }
      break;
    }
  }
}

void Relabel(Canvas& c, double p, const SplitMix64& base) {
  const ClassId classes = std::max<ClassId>(MaxClass(c), 2);
  std::map<SegmentId, ClassId> relabel;
  for (const auto& [id, cls] : c.Segments()) {
    SplitMix64 rng = base.Split(id);
    if (!rng.Bernoulli(p)) continue;
    auto pick = static_cast<ClassId>(rng.UniformInt(1, classes - 1));
    if (pick >= cls) ++pick;
    relabel[id] = pick;
  }
  for (std::size_t i = 0; i < c.inst.size(); ++i) {
    if (auto it = relabel.find(c.inst[i]); it != relabel.end()) {
      c.cls[i] = it->second;
    }
  }
}

int Steps(double magnitude) {
  return static_cast<int>(std::lround(std::max(magnitude, 0.0)));
}

}  // namespace

std::uint64_t SplitMix64::Next() {
  state_ += kGolden;
  return Mix(state_);
}

double SplitMix64::Uniform() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

std::int64_t SplitMix64::UniformInt(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v = Next();
  while (v >= limit) v = Next();
  return lo + static_cast<std::int64_t>(v % span);
}

SplitMix64 SplitMix64::Split(std::uint64_t stream) const {
  return SplitMix64(Mix(seed_ ^ Mix(stream + kGolden)));
}

PanopticAnnotation GenerateScene(const SceneSpec& spec) {
  auto invalid = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidParameter, what);
  };
  if (spec.width < 1 || spec.height < 1) invalid("frame must be non-empty");
  if (spec.num_classes < 0) invalid("num_classes must be >= 0");
  if (spec.min_instances < 0 || spec.max_instances < spec.min_instances) {
    invalid("instance range must satisfy 0 <= min <= max");
  }
  if (!spec.instances_per_class.empty() &&
      spec.instances_per_class.size() !=
          static_cast<std::size_t>(spec.num_classes)) {
    invalid("instances_per_class needs one entry per class");
  }
  if (!spec.class_radius_scale.empty() &&
      spec.class_radius_scale.size() !=
          static_cast<std::size_t>(spec.num_classes)) {
    invalid("class_radius_scale needs one entry per class");
  }
  if (!(spec.min_radius >= 1.5) || spec.max_radius < spec.min_radius) {
    invalid("radius range must satisfy 1.5 <= min <= max");
  }
  if (spec.min_gap < 0 || spec.max_attempts < 1) {
    invalid("min_gap must be >= 0 and max_attempts >= 1");
  }

  const SplitMix64 root(spec.seed);
  std::vector<int> counts(static_cast<std::size_t>(spec.num_classes));
  std::vector<double> scale(counts.size(), 1.0);
  double expected_area = 0.0;
  for (int c = 0; c < spec.num_classes; ++c) {
    const auto k = static_cast<std::size_t>(c);
    if (!spec.instances_per_class.empty()) {
      counts[k] = spec.instances_per_class[k];
      if (counts[k] < 0) invalid("instance counts must be >= 0");
    } else {
      SplitMix64 rng = root.Split(0x100000000ULL + k);
      counts[k] = static_cast<int>(
          rng.UniformInt(spec.min_instances, spec.max_instances));
    }
    if (!spec.class_radius_scale.empty()) {
      scale[k] = spec.class_radius_scale[k];
      if (!(scale[k] > 0.0)) invalid("radius scales must be positive");
    }
    const double r = 0.5 * (spec.min_radius + spec.max_radius) * scale[k];
    expected_area += counts[k] * std::numbers::pi * r * r;
  }
  const double frame = static_cast<double>(spec.width) * spec.height;
  if (expected_area >= 0.6 * frame) {
    throw Error(ErrorCode::kInfeasibleSpec,
                "expected blob area " + std::to_string(expected_area) +
                    " reaches 60% of the frame");
  }

  const auto w = static_cast<std::size_t>(spec.width);
  const auto h = static_cast<std::size_t>(spec.height);
  std::vector<std::uint32_t> cls(w * h, kVoidClass);
  std::vector<std::uint32_t> inst(w * h, kNoInstance);
  std::vector<std::uint8_t> blocked(w * h, 0);
  SegmentId next = 1;
  for (int c = 0; c < spec.num_classes; ++c) {
    const auto k = static_cast<std::size_t>(c);
    for (int b = 0; b < counts[k]; ++b) {
      SplitMix64 rng = root.Split((static_cast<std::uint64_t>(c + 1) << 32) |
                                  static_cast<std::uint64_t>(b));
      std::vector<std::pair<int, int>> placed;
      for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
        const double r =
            scale[k] * (spec.min_radius +
                        (spec.max_radius - spec.min_radius) * rng.Uniform());
        auto px = RandomDisk(rng, spec.width, spec.height, r);
        if (px.size() < 4) continue;
        const bool free =
            std::none_of(px.begin(), px.end(), [&](const auto& q) {
              return blocked[static_cast<std::size_t>(q.second) * w +
                             static_cast<std::size_t>(q.first)] != 0;
            });
        if (free) {
          placed = std::move(px);
          break;
        }
      }
      if (placed.empty()) {
        throw Error(ErrorCode::kInfeasibleSpec,
                    "could not place blob " + std::to_string(b) +
                        " of class " + std::to_string(c + 1) + " in " +
                        std::to_string(spec.max_attempts) + " attempts");
      }
      const SegmentId id = next++;
      for (const auto& [x, y] : placed) {
        const std::size_t i = static_cast<std::size_t>(y) * w +
                              static_cast<std::size_t>(x);
        cls[i] = static_cast<ClassId>(c + 1);
        inst[i] = id;
        for (int dy = -spec.min_gap; dy <= spec.min_gap; ++dy) {
          for (int dx = -spec.min_gap; dx <= spec.min_gap; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= spec.width || ny >= spec.height) {
              continue;
            }
            blocked[static_cast<std::size_t>(ny) * w +
                    static_cast<std::size_t>(nx)] = 1;
          }
        }
      }
    }
  }
  return MakeAnnotation(spec.image_id,
                        LabelMap::Build(cls, inst, spec.width, spec.height));
}

std::string_view ToString(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kErode: return "erode";
    case PerturbationKind::kDilate: return "dilate";
    case PerturbationKind::kShift: return "shift";
    case PerturbationKind::kSplit: return "split";
    case PerturbationKind::kMerge: return "merge";
    case PerturbationKind::kDrop: return "drop";
    case PerturbationKind::kSpurious: return "spurious";
    case PerturbationKind::kRelabel: return "relabel-class";
  }
  return "?";
}

Perturbation ParsePerturbation(std::string_view text) {
  const auto bad = [&] {
    return Error(ErrorCode::kInvalidParameter,
                 "bad perturbation '" + std::string(text) +
                     "', expected kind:magnitude[:seed]");
  };
  const std::size_t c1 = text.find(':');
  if (c1 == std::string_view::npos) throw bad();
  const std::string_view kind = text.substr(0, c1);
  std::string_view rest = text.substr(c1 + 1);
  std::string_view seed;
  if (const std::size_t c2 = rest.find(':'); c2 != std::string_view::npos) {
    seed = rest.substr(c2 + 1);
    rest = rest.substr(0, c2);
  }
  Perturbation p;
  bool known = false;
  for (int k = 0; k <= static_cast<int>(PerturbationKind::kRelabel); ++k) {
    const auto candidate = static_cast<PerturbationKind>(k);
    if (ToString(candidate) == kind) {
      p.kind = candidate;
      known = true;
    }
  }
  if (kind == "relabel") {
    p.kind = PerturbationKind::kRelabel;
    known = true;
  }
  if (!known) throw bad();
  try {
    std::size_t used = 0;
    const std::string m(rest);
    p.magnitude = std::stod(m, &used);
    if (used != m.size() || !(p.magnitude >= 0.0)) throw bad();
    if (!seed.empty()) {
      const std::string s(seed);
      p.seed = std::stoull(s, &used);
      if (used != s.size()) throw bad();
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  return p;
}

PanopticAnnotation Perturb(const PanopticAnnotation& annotation,
                           const Perturbation& p) {
  if (p.magnitude == 0.0) return annotation;
  Canvas c(annotation.label_map);
  const SplitMix64 base =
      SplitMix64(p.seed).Split(static_cast<std::uint64_t>(p.kind));
  switch (p.kind) {
    case PerturbationKind::kErode: Erode(c, Steps(p.magnitude)); break;
    case PerturbationKind::kDilate: Dilate(c, Steps(p.magnitude)); break;
    case PerturbationKind::kShift:
      if (Steps(p.magnitude) > 0) Shift(c, Steps(p.magnitude), base);
      break;
    case PerturbationKind::kSplit: Split(c, p.magnitude, base); break;
    case PerturbationKind::kMerge: Merge(c, p.magnitude, base); break;
    case PerturbationKind::kDrop: Drop(c, p.magnitude, base); break;
    case PerturbationKind::kSpurious:
      Spurious(c, Steps(p.magnitude), base);
      break;
    case PerturbationKind::kRelabel: Relabel(c, p.magnitude, base); break;
  }
  return c.Finish(annotation.image_id);
}

PanopticAnnotation PerturbAll(const PanopticAnnotation& annotation,
                              const std::vector<Perturbation>& perturbations) {
  PanopticAnnotation out = annotation;
  for (const Perturbation& p : perturbations) out = Perturb(out, p);
  return out;
}

}  // namespace pqsuite
