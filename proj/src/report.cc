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

#include "lombard/report.h"

#include <cmath>
#include <fstream>
#include <limits>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "lombard/stats.h"

namespace lombard {
namespace {

using nlohmann::json;

std::string Arrow(const TTestResult& test) {
  switch (test.direction) {
    case Direction::kIncrease:
      return "↑";
    case Direction::kDecrease:
      return "↓";
    case Direction::kNone:
      return "=";
  }
  return "=";
}

std::string Level(double level) { return absl::StrFormat("%g", level); }

std::string Row(const ComparisonRecord& c);

std::string Transitions(const LadderResult& r, absl::string_view sep) {
  if (r.transition_points.empty()) return "none";
  std::vector<std::string> parts;
  for (double t : r.transition_points) parts.push_back(Level(t));
  return absl::StrJoin(parts, sep);
}

std::string Text(const LadderResult& r) {
  std::string out = absl::StrFormat(
      "Lombard flavor classification, %s noise, seed %d, alpha %g\n",
      std::string(NoiseKindName(r.noise_type)), r.seed, r.alpha);
  absl::StrAppend(&out, "pair  lower  higher  t\n");
  for (const auto& c : r.comparisons) absl::StrAppend(&out, Row(c));
  absl::StrAppend(&out, "transition points: ", Transitions(r, ", "), "\n");
  absl::StrAppendFormat(&out, "flavors: %d\n", r.n_flavors);
  return out;
}

std::string Csv(const LadderResult& r) {
  std::string out =
      "base_level,high_level,mean_base,sd_base,mean_high,sd_high,direction,"
      "statistic,df,p_two_tailed,significant\n";
  for (const auto& c : r.comparisons) {
    absl::StrAppendFormat(
        &out, "%s,%s,%.6f,%.6f,%.6f,%.6f,%s,%.6g,%d,%.6g,%d\n",
        Level(c.base_level), Level(c.high_level), CompensatedMean(c.wcr_base),
        SampleStdDev(c.wcr_base), CompensatedMean(c.wcr_high),
        SampleStdDev(c.wcr_high), std::string(DirectionName(c.test.direction)),
        c.test.t_stat, c.test.df, c.test.p_two_tailed, c.significant ? 1 : 0);
  }
  absl::StrAppend(&out, "# transition_points: ", Transitions(r, ";"), "\n");
  absl::StrAppendFormat(&out, "# flavors: %d\n", r.n_flavors);
  return out;
}

json Number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double ToNumber(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

json TestJson(const TTestResult& t) {
  return {{"method", std::string(PairedTestMethodName(t.method))},
          {"statistic", Number(t.t_stat)},
          {"df", t.df},
          {"p_two_tailed", Number(t.p_two_tailed)},
          {"mean_diff", Number(t.mean_diff)},
          {"direction", std::string(DirectionName(t.direction))},
          {"saturated", t.saturated}};
}

absl::StatusOr<TTestResult> TestFromJson(const json& j) {
  TTestResult t;
  auto method = ParsePairedTestMethod(j.at("method").get<std::string>());
  if (!method.ok()) return method.status();
  t.method = *method;
  t.t_stat = ToNumber(j.at("statistic"));
  t.df = j.at("df").get<int>();
  t.p_two_tailed = ToNumber(j.at("p_two_tailed"));
  t.mean_diff = ToNumber(j.at("mean_diff"));
  const auto dir = j.at("direction").get<std::string>();
  if (dir == "increase") {
    t.direction = Direction::kIncrease;
  } else if (dir == "decrease") {
    t.direction = Direction::kDecrease;
  } else if (dir == "none") {
    t.direction = Direction::kNone;
  } else {
    return absl::InvalidArgumentError("unknown direction '" + dir + "'");
  }
  t.saturated = j.at("saturated").get<bool>();
  return t;
}

json ComparisonJson(const ComparisonRecord& c) {
  json per_speaker = json::array();
  for (const auto& s : c.per_speaker) {
    per_speaker.push_back(
        {{"speaker_id", s.speaker_id}, {"test", TestJson(s.test)}});
  }
  return {{"base_level", c.base_level},
          {"high_level", c.high_level},
          {"sentence_ids", c.sentence_ids},
          {"wcr_base", c.wcr_base},
          {"wcr_high", c.wcr_high},
          {"stoi_base", c.stoi_base},
          {"stoi_high", c.stoi_high},
          {"test", TestJson(c.test)},
          {"significant", c.significant},
          {"per_speaker", per_speaker}};
}

std::string Row(const ComparisonRecord& c) {
  return absl::StrFormat(
      "%s/%s  %.2f±%.2f  %.2f±%.2f  %s%s\n", Level(c.base_level),
      Level(c.high_level), CompensatedMean(c.wcr_base),
      SampleStdDev(c.wcr_base), CompensatedMean(c.wcr_high),
      SampleStdDev(c.wcr_high), Arrow(c.test), c.significant ? "*" : "");
}

json ResultJson(const LadderResult& r) {
  json comparisons = json::array();
  for (const auto& c : r.comparisons) comparisons.push_back(ComparisonJson(c));
  return {{"noise_type", std::string(NoiseKindName(r.noise_type))},
          {"seed", r.seed},
          {"alpha", r.alpha},
          {"comparisons", comparisons},
          {"transition_points", r.transition_points},
          {"n_flavors", r.n_flavors}};
}

}  // namespace

absl::StatusOr<ReportFormat> ParseReportFormat(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "text" || lower == "txt") return ReportFormat::kText;
  if (lower == "csv") return ReportFormat::kCsv;
  if (lower == "json") return ReportFormat::kJson;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown report format '%s'", name));
}

ReportFormat ReportFormatForPath(const std::filesystem::path& path) {
  const std::string ext = absl::AsciiStrToLower(path.extension().string());
  if (ext == ".csv") return ReportFormat::kCsv;
  if (ext == ".json") return ReportFormat::kJson;
  return ReportFormat::kText;
}

std::string RenderReport(const LadderResult& result, ReportFormat format) {
  switch (format) {
    case ReportFormat::kText:
      return Text(result);
    case ReportFormat::kCsv:
      return Csv(result);
    case ReportFormat::kJson:
      return ResultJson(result).dump(2) + "\n";
  }
  return Text(result);
}

std::string RenderComparison(const ComparisonRecord& record,
                             ReportFormat format) {
  if (format == ReportFormat::kJson) {
    return ComparisonJson(record).dump(2) + "\n";
  }
  if (format == ReportFormat::kCsv) {
    LadderResult wrapper;
    wrapper.comparisons.push_back(record);
    std::string csv = Csv(wrapper);
    return csv.substr(0, csv.find("# "));
  }
  return absl::StrCat(Row(record),
                      absl::StrFormat("%s = %.4f, df = %d, p = %.4g\n",
                                      record.test.method ==
                                              PairedTestMethod::kStudentT
                                          ? "t"
                                          : "z",
                                      record.test.t_stat, record.test.df,
                                      record.test.p_two_tailed));
}

std::string RenderJsonArray(const std::vector<LadderResult>& results) {
  json arr = json::array();
  for (const auto& r : results) arr.push_back(ResultJson(r));
  return arr.dump(2) + "\n";
}

absl::StatusOr<LadderResult> LadderResultFromJson(absl::string_view text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("report must be a JSON object");
  }
  try {
    LadderResult r;
    auto kind = ParseNoiseKind(j.at("noise_type").get<std::string>());
    if (!kind.ok()) return kind.status();
    r.noise_type = *kind;
    r.seed = j.at("seed").get<uint64_t>();
    r.alpha = j.at("alpha").get<double>();
    for (const auto& c : j.at("comparisons")) {
      ComparisonRecord rec;
      rec.base_level = c.at("base_level").get<double>();
      rec.high_level = c.at("high_level").get<double>();
      rec.sentence_ids = c.at("sentence_ids").get<std::vector<std::string>>();
      rec.wcr_base = c.at("wcr_base").get<std::vector<double>>();
      rec.wcr_high = c.at("wcr_high").get<std::vector<double>>();
      rec.stoi_base = c.at("stoi_base").get<std::vector<double>>();
      rec.stoi_high = c.at("stoi_high").get<std::vector<double>>();
      auto test = TestFromJson(c.at("test"));
      if (!test.ok()) return test.status();
      rec.test = *test;
      rec.significant = c.at("significant").get<bool>();
      for (const auto& s : c.at("per_speaker")) {
        SpeakerTest st;
        st.speaker_id = s.at("speaker_id").get<std::string>();
        auto t = TestFromJson(s.at("test"));
        if (!t.ok()) return t.status();
        st.test = *t;
        rec.per_speaker.push_back(std::move(st));
      }
      r.comparisons.push_back(std::move(rec));
    }
    r.transition_points = j.at("transition_points").get<std::vector<double>>();
    r.n_flavors = j.at("n_flavors").get<int>();
    return r;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed report: ", e.what()));
  }
}

absl::Status WriteTextFile(const std::filesystem::path& path,
                           absl::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write %s", path.string()));
  }
  out << contents;
  out.close();
  if (!out) {
    return absl::DataLossError(
        absl::StrFormat("write to %s failed", path.string()));
  }
  return absl::OkStatus();
}

}  // namespace lombard
