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

#ifndef PQSUITE_REPORT_H_
#define PQSUITE_REPORT_H_

#include <string>
#include <string_view>

#include "pqsuite/pqmetrics.h"

namespace pqsuite {

// Pretty-printed JSON with a trailing newline. Undefined values are null.
std::string ReportToJson(const MetricReport& report);

// Header "scope,id,metric,value"; scope is aggregate, class, image,
// macro-class or macro-image. Undefined values are empty cells.
std::string ReportToCsv(const MetricReport& report);

// Fixed-width table in the column order PQ, mPQ+, bPQ, iPQ, wPQ, fwPQ, R2,
// values in percent.
std::string ReportToTable(const MetricReport& report);

std::string ConfigToJson(const MetricConfig& config);
// Accepts the object written by ConfigToJson, either bare or as the "config"
// member of a report. Missing keys keep their defaults. Throws
// Error(kParseError) or Error(kInvalidParameter).
MetricConfig ConfigFromJson(std::string_view json_text);

}  // namespace pqsuite

#endif  // PQSUITE_REPORT_H_
