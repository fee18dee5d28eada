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

#include "lombard/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "absl/strings/str_format.h"

namespace lombard {
namespace {

absl::Status CheckPaired(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "paired test needs equal lengths, got %d and %d", x.size(), y.size()));
  }
  if (x.size() < 2) {
    return absl::InvalidArgumentError("paired test needs at least 2 pairs");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("paired test: non-finite value at index %d", i));
    }
  }
  return absl::OkStatus();
}

std::vector<double> Differences(std::span<const double> x,
                                std::span<const double> y) {
  std::vector<double> d(x.size());
  for (size_t i = 0; i < x.size(); ++i) d[i] = y[i] - x[i];
  return d;
}

Direction DirectionOf(double mean_diff) {
  if (mean_diff > 0.0) return Direction::kIncrease;
  if (mean_diff < 0.0) return Direction::kDecrease;
  return Direction::kNone;
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double BetaContinuedFraction(double x, double a, double b) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) break;
  }
  return h;
}

}  // namespace

absl::string_view DirectionName(Direction direction) {
  switch (direction) {
    case Direction::kIncrease:
      return "increase";
    case Direction::kDecrease:
      return "decrease";
    case Direction::kNone:
      return "none";
  }
  return "none";
}

absl::StatusOr<PairedTestMethod> ParsePairedTestMethod(absl::string_view name) {
  if (name == "paired-t" || name == "t") return PairedTestMethod::kStudentT;
  if (name == "signed-rank" || name == "wilcoxon") {
    return PairedTestMethod::kSignedRank;
  }
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown paired test '%s'", name));
}

absl::string_view PairedTestMethodName(PairedTestMethod method) {
  return method == PairedTestMethod::kStudentT ? "paired-t" : "signed-rank";
}

double CompensatedSum(std::span<const double> values) {
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return sum + compensation;
}

double CompensatedMean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return CompensatedSum(values) / static_cast<double>(values.size());
}

double SampleStdDev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = CompensatedMean(values);
  std::vector<double> sq(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    sq[i] = (values[i] - mean) * (values[i] - mean);
  }
  return std::sqrt(CompensatedSum(sq) / (values.size() - 1));
}

double RegularizedIncompleteBeta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(x, a, b) / a;
  }
  return 1.0 - front * BetaContinuedFraction(1.0 - x, b, a) / b;
}

absl::StatusOr<double> StudentTSf(double t, double df) {
  if (!(df >= 1.0) || !std::isfinite(df)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("degrees of freedom must be >= 1, got %g", df));
  }
  if (std::isnan(t)) return absl::InvalidArgumentError("t is NaN");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double abs_t = std::fabs(t);
  double upper;
  // Pick the argument that keeps precision in each regime.
  if (abs_t * abs_t < df) {
    const double x = abs_t * abs_t / (df + abs_t * abs_t);
    upper = 0.5 - 0.5 * RegularizedIncompleteBeta(x, 0.5, df / 2.0);
  } else {
    const double x = df / (df + abs_t * abs_t);
    upper = 0.5 * RegularizedIncompleteBeta(x, df / 2.0, 0.5);
  }
  return t > 0.0 ? upper : 1.0 - upper;
}

absl::StatusOr<TTestResult> PairedTTest(std::span<const double> x,
                                        std::span<const double> y) {
  if (auto s = CheckPaired(x, y); !s.ok()) return s;
  const std::vector<double> d = Differences(x, y);
  const size_t n = d.size();
  TTestResult result;
  result.method = PairedTestMethod::kStudentT;
  result.df = static_cast<int>(n) - 1;
  result.mean_diff = CompensatedMean(d);
  result.direction = DirectionOf(result.mean_diff);
  const double sd = SampleStdDev(d);
  if (sd == 0.0) {
    if (result.mean_diff == 0.0) {
      result.t_stat = 0.0;
      result.p_two_tailed = 1.0;
    } else {
      result.saturated = true;
      result.t_stat = std::copysign(std::numeric_limits<double>::infinity(),
                                    result.mean_diff);
      result.p_two_tailed = 0.0;
    }
    return result;
  }
  result.t_stat = result.mean_diff / (sd / std::sqrt(static_cast<double>(n)));
  auto sf = StudentTSf(std::fabs(result.t_stat), result.df);
  if (!sf.ok()) return sf.status();
  result.p_two_tailed = std::min(1.0, 2.0 * *sf);
  return result;
}

absl::StatusOr<TTestResult> SignedRankTest(std::span<const double> x,
                                           std::span<const double> y) {
  if (auto s = CheckPaired(x, y); !s.ok()) return s;
  const std::vector<double> d = Differences(x, y);
  TTestResult result;
  result.method = PairedTestMethod::kSignedRank;
  result.mean_diff = CompensatedMean(d);
  result.direction = DirectionOf(result.mean_diff);

  std::vector<double> nonzero;
  for (double v : d) {
    if (v != 0.0) nonzero.push_back(v);
  }
  const size_t n = nonzero.size();
  result.df = std::max<int>(1, static_cast<int>(n) - 1);
  if (n == 0) {
    result.t_stat = 0.0;
    result.p_two_tailed = 1.0;
    return result;
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t l, size_t r) {
    return std::fabs(nonzero[l]) < std::fabs(nonzero[r]);
  });
  std::vector<double> rank(n);
  bool ties = false;
  double tie_term = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i + 1;
    while (j < n &&
           std::fabs(nonzero[order[j]]) == std::fabs(nonzero[order[i]])) {
      ++j;
    }
    const double average = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) rank[order[k]] = average;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) ties = true;
    tie_term += t * t * t - t;
    i = j;
  }
  double w_plus = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (nonzero[i] > 0.0) w_plus += rank[i];
  }
  const double nn = static_cast<double>(n);
  const double mu = nn * (nn + 1.0) / 4.0;
  const double var =
      nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  result.t_stat = var > 0.0 ? (w_plus - mu) / std::sqrt(var) : 0.0;

  if (!ties && n <= 50) {
    // counts[s] = number of sign assignments with W+ == s.
    const size_t max_sum = n * (n + 1) / 2;
    std::vector<double> counts(max_sum + 1, 0.0);
    counts[0] = 1.0;
    for (size_t r = 1; r <= n; ++r) {
      for (size_t s = max_sum; s >= r; --s) counts[s] += counts[s - r];
    }
    const double total = std::ldexp(1.0, static_cast<int>(n));
    const auto w = static_cast<size_t>(std::lround(w_plus));
    double lower = 0.0, upper = 0.0;
    for (size_t s = 0; s <= max_sum; ++s) {
      if (s <= w) lower += counts[s];
      if (s >= w) upper += counts[s];
    }
    result.p_two_tailed =
        std::min(1.0, 2.0 * std::min(lower, upper) / total);
  } else {
    if (var <= 0.0) {
      result.p_two_tailed = 1.0;
    } else {
      const double correction = w_plus > mu ? -0.5 : (w_plus < mu ? 0.5 : 0.0);
      const double z = std::fabs(w_plus - mu + correction) / std::sqrt(var);
      result.p_two_tailed = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
  }
  return result;
}

absl::StatusOr<TTestResult> PairedTest(PairedTestMethod method,
                                       std::span<const double> x,
                                       std::span<const double> y) {
  return method == PairedTestMethod::kStudentT ? PairedTTest(x, y)
                                               : SignedRankTest(x, y);
}

}  // namespace lombard
