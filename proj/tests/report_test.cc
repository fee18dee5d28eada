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
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "support/synthetic_corpus.h"

namespace lombard {
namespace {

ComparisonRecord Record() {
  ComparisonRecord r;
  r.base_level = 30;
  r.high_level = 45;
  r.sentence_ids = {"s01", "s02", "s03"};
  // Three points at m - d, m, m + d have mean m and sample SD d.
  r.wcr_base = {89.56 - 2.30, 89.56, 89.56 + 2.30};
  r.wcr_high = {92.27 - 1.33, 92.27, 92.27 + 1.33};
  r.stoi_base = {0.81, 0.82, 0.83};
  r.stoi_high = {0.84, 0.85, 0.86};
  r.test.t_stat = 12.5;
  r.test.df = 2;
  r.test.p_two_tailed = 0.0004;
  r.test.mean_diff = 2.71;
  r.test.direction = Direction::kIncrease;
  r.significant = true;
  return r;
}

LadderResult Result() {
  LadderResult r;
  r.noise_type = NoiseKind::kSsn;
  r.seed = 7;
  r.comparisons.push_back(Record());
  ComparisonRecord flat = Record();
  flat.base_level = 45;
  flat.high_level = 50;
  flat.wcr_high = flat.wcr_base = {92.0, 92.0, 92.0};
  flat.test.direction = Direction::kNone;
  flat.test.t_stat = 0;
  flat.test.p_two_tailed = 1;
  flat.significant = false;
  r.comparisons.push_back(flat);
  r.transition_points = {45};
  r.n_flavors = 2;
  return r;
}

std::vector<std::string> Lines(const std::string& text) {
  return absl::StrSplit(text, '\n', absl::SkipEmpty());
}

TEST(RenderReportTest, TextRow) {
  const auto lines = Lines(RenderReport(Result(), ReportFormat::kText));
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0],
            "Lombard flavor classification, ssn noise, seed 7, alpha 0.001");
  EXPECT_EQ(lines[1], "pair  lower  higher  t");
  EXPECT_EQ(lines[2], "30/45  89.56±2.30  92.27±1.33  ↑*");
  EXPECT_EQ(lines[3], "45/50  92.00±0.00  92.00±0.00  =");
  EXPECT_EQ(lines[4], "transition points: 45");
  EXPECT_EQ(lines[5], "flavors: 2");
}

TEST(RenderReportTest, DecreaseArrow) {
  LadderResult r = Result();
  r.comparisons[0].test.direction = Direction::kDecrease;
  r.comparisons[0].significant = false;
  const auto lines = Lines(RenderReport(r, ReportFormat::kText));
  EXPECT_EQ(lines[2], "30/45  89.56±2.30  92.27±1.33  ↓");
}

TEST(RenderReportTest, EmptyComparisons) {
  LadderResult r;
  r.noise_type = NoiseKind::kBabble;
  const auto lines = Lines(RenderReport(r, ReportFormat::kText));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[2], "transition points: none");
  EXPECT_EQ(lines[3], "flavors: 1");
}

TEST(RenderReportTest, Csv) {
  const auto lines = Lines(RenderReport(Result(), ReportFormat::kCsv));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0],
            "base_level,high_level,mean_base,sd_base,mean_high,sd_high,"
            "direction,statistic,df,p_two_tailed,significant");
  EXPECT_EQ(lines[1],
            "30,45,89.560000,2.300000,92.270000,1.330000,increase,12.5,2,"
            "0.0004,1");
  EXPECT_EQ(lines[3], "# transition_points: 45");
  EXPECT_EQ(lines[4], "# flavors: 2");
}

TEST(RenderReportTest, JsonRoundTrip) {
  LadderResult r = Result();
  r.comparisons[0].per_speaker.push_back({"S01", r.comparisons[0].test});
  r.comparisons[1].test.saturated = true;
  r.comparisons[1].test.t_stat = std::numeric_limits<double>::infinity();
  r.comparisons[1].stoi_base[0] = 0.1 + 0.2;
  auto back = LadderResultFromJson(RenderReport(r, ReportFormat::kJson));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, r);
}

TEST(RenderReportTest, JsonErrors) {
  EXPECT_FALSE(LadderResultFromJson("[]").ok());
  EXPECT_FALSE(LadderResultFromJson("{").ok());
  EXPECT_FALSE(LadderResultFromJson(R"({"noise_type": "ssn"})").ok());
}

TEST(RenderComparisonTest, TextAddsStatistics) {
  const auto lines = Lines(RenderComparison(Record(), ReportFormat::kText));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "30/45  89.56±2.30  92.27±1.33  ↑*");
  EXPECT_EQ(lines[1], "t = 12.5000, df = 2, p = 0.0004");
  EXPECT_EQ(Lines(RenderComparison(Record(), ReportFormat::kCsv)).size(), 2u);
}

TEST(ReportFormatTest, Names) {
  EXPECT_EQ(*ParseReportFormat("JSON"), ReportFormat::kJson);
  EXPECT_EQ(*ParseReportFormat("csv"), ReportFormat::kCsv);
  EXPECT_EQ(*ParseReportFormat("text"), ReportFormat::kText);
  EXPECT_FALSE(ParseReportFormat("xml").ok());
  EXPECT_EQ(ReportFormatForPath("a/b.json"), ReportFormat::kJson);
  EXPECT_EQ(ReportFormatForPath("a/b.CSV"), ReportFormat::kCsv);
  EXPECT_EQ(ReportFormatForPath("a/b"), ReportFormat::kText);
}

TEST(WriteTextFileTest, WritesAndFails) {
  const auto dir = testing::MakeTempDir("report");
  ASSERT_TRUE(WriteTextFile(dir / "r.txt", "hello\n").ok());
  std::ifstream in(dir / "r.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "hello\n");
  EXPECT_FALSE(WriteTextFile(dir / "no" / "such" / "r.txt", "x").ok());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace lombard
