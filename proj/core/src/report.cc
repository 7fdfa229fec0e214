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

#include "pqsuite/report.h"

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pqsuite/error.h"

namespace pqsuite {
namespace {

using Json = nlohmann::ordered_json;

Json Value(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json StatsJson(const PqStats& s) {
  Json j;
  j["tp"] = s.tp;
  j["fp"] = s.fp;
  j["fn"] = s.fn;
  j["iou_sum"] = s.quality_sum;
  return j;
}

Json ConfigJson(const MetricConfig& c) {
  Json j;
  Json metrics = Json::array();
  for (Metric m : c.metrics) metrics.push_back(std::string(ToString(m)));
  j["metrics"] = metrics;
  j["denominator"] = std::string(ToString(c.denominator));
  j["aggregate"] = std::string(ToString(c.aggregate));
  j["all_aggregates"] = c.all_aggregates;
  j["bpq_d"] = c.bpq_d;
  j["bpq_mode"] = std::string(ToString(c.bpq_mode));
  j["wpq_a"] = c.wpq_a;
  j["wpq_d"] = c.wpq_d;
  j["match_threshold"] = c.match_threshold;
  j["void_fraction_threshold"] = c.void_fraction_threshold;
  j["subtract_void_from_iou"] = c.subtract_void_from_iou;
  j["frequency_basis"] = std::string(ToString(c.frequency_basis));
  if (c.fault_inclusive_threshold) j["fault_inclusive_threshold"] = true;
  return j;
}

Json ConventionJson(const ConventionValues& v) {
  Json j;
  j["pq"] = Value(v.pq);
  j["bpq"] = Value(v.bpq);
  j["wpq"] = Value(v.wpq);
  return j;
}

std::string Number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

std::string Percent(const std::optional<double>& v) {
  char buf[32];
  if (!v) {
    std::snprintf(buf, sizeof(buf), "%8s", "-");
  } else {
    std::snprintf(buf, sizeof(buf), "%8.2f", *v * 100.0);
  }
  return buf;
}

}  // namespace

std::string ReportToJson(const MetricReport& r) {
  Json j;
  j["config"] = ConfigJson(r.config);

  Json per_class = Json::object();
  for (const ClassReport& c : r.per_class) {
    Json e;
    e["name"] = c.name;
    e["pq"] = Value(c.pq);
    e["sq"] = Value(c.sq);
    e["rq"] = Value(c.rq);
    e["bpq"] = Value(c.bpq);
    e["wpq"] = Value(c.wpq);
    e["pq_image_mean"] = Value(c.pq_image_mean);
    e["counts"] = StatsJson(c.stats);
    e["gt_pixels"] = c.gt_pixels;
    e["gt_instances"] = c.gt_instances;
    e["pred_instances"] = c.pred_instances;
    per_class[std::to_string(c.class_id)] = e;
  }
  j["per_class"] = per_class;

  Json per_image = Json::array();
  for (const ImageReport& im : r.per_image) {
    Json e;
    e["image_id"] = im.image_id;
    e["pq"] = Value(im.pq);
    e["ipq_score"] = Value(im.ipq_score);
    e["tp"] = im.tp;
    e["fp"] = im.fp;
    e["fn"] = im.fn;
    e["discarded"] = im.discarded;
    e["nulled_fp"] = im.nulled_fp;
    per_image.push_back(e);
  }
  j["per_image"] = per_image;

  const AggregateValues& a = r.aggregate;
  Json agg;
  agg["pq"] = Value(a.pq);
  agg["mpq_plus"] = Value(a.mpq_plus);
  agg["bpq"] = Value(a.bpq);
  agg["ipq"] = Value(a.ipq);
  agg["wpq"] = Value(a.wpq);
  agg["fwpq"] = Value(a.fwpq);
  agg["r2"] = Value(a.r2);
  j["aggregate"] = agg;
  if (r.macro_class) j["macro_class"] = ConventionJson(*r.macro_class);
  if (r.macro_image) j["macro_image"] = ConventionJson(*r.macro_image);

  Json counts;
  counts["images"] = r.counts.images;
  counts["tp"] = r.counts.tp;
  counts["fp"] = r.counts.fp;
  counts["fn"] = r.counts.fn;
  counts["discarded"] = r.counts.discarded;
  counts["nulled_fp"] = r.counts.nulled_fp;
  j["counts"] = counts;
  j["observations"] = r.observations;
  j["warnings"] = r.warnings;
  j["failures"] = r.failures;
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  return j.dump(2) + "\n";
}

std::string ReportToCsv(const MetricReport& r) {
  std::string out = "scope,id,metric,value\n";
  auto row = [&out](std::string_view scope, const std::string& id,
                    std::string_view metric, const std::optional<double>& v) {
    out.append(scope).append(",").append(id).append(",").append(metric);
    out.append(",").append(Number(v)).append("\n");
  };
  const AggregateValues& a = r.aggregate;
  const MetricConfig& c = r.config;
  if (c.Wants(Metric::kPq)) row("aggregate", "", "pq", a.pq);
  if (c.Wants(Metric::kMpqPlus)) row("aggregate", "", "mpq_plus", a.mpq_plus);
  if (c.Wants(Metric::kBpq)) row("aggregate", "", "bpq", a.bpq);
  if (c.Wants(Metric::kIpq)) row("aggregate", "", "ipq", a.ipq);
  if (c.Wants(Metric::kWpq)) row("aggregate", "", "wpq", a.wpq);
  if (c.Wants(Metric::kFwpq)) row("aggregate", "", "fwpq", a.fwpq);
  if (c.Wants(Metric::kR2)) row("aggregate", "", "r2", a.r2);
  auto convention = [&](std::string_view scope,
                        const std::optional<ConventionValues>& v) {
    if (!v) return;
    if (c.Wants(Metric::kPq)) row(scope, "", "pq", v->pq);
    if (c.Wants(Metric::kBpq)) row(scope, "", "bpq", v->bpq);
    if (c.Wants(Metric::kWpq)) row(scope, "", "wpq", v->wpq);
  };
  convention("macro-class", r.macro_class);
  convention("macro-image", r.macro_image);
  for (const ClassReport& cr : r.per_class) {
    const std::string id = std::to_string(cr.class_id);
    row("class", id, "pq", cr.pq);
    row("class", id, "sq", cr.sq);
    row("class", id, "rq", cr.rq);
    if (c.Wants(Metric::kBpq)) row("class", id, "bpq", cr.bpq);
    if (c.Wants(Metric::kWpq)) row("class", id, "wpq", cr.wpq);
  }
  for (const ImageReport& im : r.per_image) {
    row("image", im.image_id, "pq", im.pq);
    row("image", im.image_id, "ipq_score", im.ipq_score);
  }
  return out;
}

std::string ReportToTable(const MetricReport& r) {
  const AggregateValues& a = r.aggregate;
  std::string out;
  out += "      PQ    mPQ+     bPQ     iPQ     wPQ    fwPQ      R2\n";
  out += Percent(a.pq) + Percent(a.mpq_plus) + Percent(a.bpq) +
         Percent(a.ipq) + Percent(a.wpq) + Percent(a.fwpq) + Percent(a.r2);
  out += "\n";
  if (!r.per_class.empty()) {
    out += "\nclass                     PQ      SQ      RQ\n";
    for (const ClassReport& c : r.per_class) {
      std::string label = std::to_string(c.class_id);
      if (!c.name.empty()) label += " " + c.name;
      if (label.size() > 20) label.resize(20);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%-20s", label.c_str());
      out += buf + Percent(c.pq) + Percent(c.sq) + Percent(c.rq) + "\n";
    }
  }
  return out;
}

std::string ConfigToJson(const MetricConfig& config) {
  return ConfigJson(config).dump(2) + "\n";
}

MetricConfig ConfigFromJson(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (j.is_object() && j.contains("config")) j = j["config"];
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError, "config must be a JSON object");
  }
  MetricConfig c;
  try {
    if (j.contains("metrics")) {
      std::string joined;
      for (const auto& m : j["metrics"]) {
        if (!joined.empty()) joined += ",";
        joined += m.get<std::string>();
      }
      c.metrics = ParseMetricList(joined);
    }
    if (j.contains("denominator")) {
      c.denominator = ParseDenominator(j["denominator"].get<std::string>());
    }
    if (j.contains("aggregate")) {
      c.aggregate = ParseAggregate(j["aggregate"].get<std::string>());
    }
    if (j.contains("all_aggregates")) {
      c.all_aggregates = j["all_aggregates"].get<bool>();
    }
    if (j.contains("bpq_d")) c.bpq_d = j["bpq_d"].get<double>();
    if (j.contains("bpq_mode")) {
      c.bpq_mode = ParseBpqMode(j["bpq_mode"].get<std::string>());
    }
    if (j.contains("wpq_a")) c.wpq_a = j["wpq_a"].get<double>();
    if (j.contains("wpq_d")) c.wpq_d = j["wpq_d"].get<double>();
    if (j.contains("match_threshold")) {
      c.match_threshold = j["match_threshold"].get<double>();
    }
    if (j.contains("void_fraction_threshold")) {
      c.void_fraction_threshold = j["void_fraction_threshold"].get<double>();
    }
    if (j.contains("subtract_void_from_iou")) {
      c.subtract_void_from_iou = j["subtract_void_from_iou"].get<bool>();
    }
    if (j.contains("frequency_basis")) {
      c.frequency_basis =
          ParseFrequencyBasis(j["frequency_basis"].get<std::string>());
    }
    if (j.contains("fault_inclusive_threshold")) {
      c.fault_inclusive_threshold = j["fault_inclusive_threshold"].get<bool>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  c.Check();
  return c;
}

}  // namespace pqsuite
