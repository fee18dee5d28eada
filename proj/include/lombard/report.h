// Copyright 2026 The Lombard Flavor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOMBARD_REPORT_H_
#define LOMBARD_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "lombard/classifier.h"

namespace lombard {

enum class ReportFormat { kText, kCsv, kJson };

absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name);
// .csv and .json by extension, text otherwise.
ReportFormat ReportFormatForPath(const std::filesystem::path& path);

// Text rows look like `30/45  89.56±2.30  92.27±1.33  ↑*`: level pair,
// mean±sd of the lower and higher group, the sign of the mean difference
// (↑, ↓ or =) and `*` for a significant increase. The footer lists the
// transition points and the flavor count.
std::string RenderReport(const LadderResult& result, ReportFormat format);

// Single level pair: the text row plus the test statistics, or a JSON
// object with the full record.
std::string RenderComparison(const ComparisonRecord& record,
                             ReportFormat format);

// A JSON array of full results, one per seed.
std::string RenderJsonArray(const std::vector<LadderResult>& results);

// Inverse of the JSON rendering; accepts one object.
absl::StatusOr<LadderResult> LadderResultFromJson(absl::string_view json);

absl::Status WriteTextFile(const std::filesystem::path& path,
                           absl::string_view contents);

}  // namespace lombard

#endif  // LOMBARD_REPORT_H_
