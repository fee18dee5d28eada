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

#ifndef LOMBARD_STATS_H_
#define LOMBARD_STATS_H_

#include <span>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace lombard {

enum class Direction { kIncrease, kDecrease, kNone };

absl::string_view DirectionName(Direction direction);

enum class PairedTestMethod { kStudentT, kSignedRank };

absl::StatusOr<PairedTestMethod> ParsePairedTestMethod(absl::string_view name);
absl::string_view PairedTestMethodName(PairedTestMethod method);

// Outcome of a paired comparison of y against x (differences y - x).
// For the signed-rank method t_stat holds the standardized statistic and
// df the number of non-zero differences minus one.
struct TTestResult {
  PairedTestMethod method = PairedTestMethod::kStudentT;
  double t_stat = 0.0;
  int df = 1;
  double p_two_tailed = 1.0;
  double mean_diff = 0.0;
  Direction direction = Direction::kNone;
  // Zero-variance differences with a non-zero mean: t is infinite, p is 0.
  bool saturated = false;

  bool operator==(const TTestResult&) const = default;
};

// Neumaier-compensated sum; deterministic in input order.
double CompensatedSum(std::span<const double> values);
double CompensatedMean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double SampleStdDev(std::span<const double> values);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double RegularizedIncompleteBeta(double x, double a, double b);

// P(T > t) for Student's t with df degrees of freedom, computed as
// I_{df/(df+t^2)}(df/2, 1/2) / 2 for t >= 0 and 1 - sf(-t) otherwise.
absl::StatusOr<double> StudentTSf(double t, double df);

// Two-tailed paired Student t-test on d_i = y_i - x_i, df = n - 1.
absl::StatusOr<TTestResult> PairedTTest(std::span<const double> x,
                                        std::span<const double> y);

// Wilcoxon signed-rank test on d_i = y_i - x_i. Zero differences are
// dropped; p is exact for up to 50 untied differences and uses the
// tie-corrected normal approximation otherwise.
absl::StatusOr<TTestResult> SignedRankTest(std::span<const double> x,
                                           std::span<const double> y);

absl::StatusOr<TTestResult> PairedTest(PairedTestMethod method,
                                       std::span<const double> x,
                                       std::span<const double> y);

}  // namespace lombard

#endif  // LOMBARD_STATS_H_
