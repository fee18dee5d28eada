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

#include <cmath>
#include <numbers>

#include "boost/math/distributions/students_t.hpp"
#include "gtest/gtest.h"
#include "lombard/random.h"

namespace lombard {
namespace {

// P(T > t) by composite Simpson integration of the t density over
// [t, t + span] with the substitution u = atan(x) to cover the tail.
double IntegratedSf(double t, double df) {
  const double log_c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
                       0.5 * std::log(df * std::numbers::pi);
  auto g = [&](double u) {
    const double x = std::tan(u);
    const double sec2 = 1.0 + x * x;
    return std::exp(log_c - (df + 1) / 2 * std::log1p(x * x / df)) * sec2;
  };
  const double lo = std::atan(t), hi = std::numbers::pi / 2;
  const int n = 200000;
  const double h = (hi - lo) / n;
  double s = g(lo) + (df > 1 ? 0.0 : g(hi - 1e-12));
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(lo + i * h);
  return s * h / 3.0;
}

TEST(StudentTSfTest, Examples) {
  for (double df : {1.0, 2.0, 19.0, 1000.0}) {
    EXPECT_EQ(*StudentTSf(0.0, df), 0.5);
  }
  EXPECT_NEAR(*StudentTSf(1.0, 1.0), 0.25, 1e-10);
  EXPECT_NEAR(*StudentTSf(2.093, 19.0), 0.025, 5e-4);
  EXPECT_NEAR(*StudentTSf(2.093, 19.0), IntegratedSf(2.093, 19.0), 1e-9);
}

TEST(StudentTSfTest, MatchesIntegrationAndBoost) {
  for (double df : {1.0, 2.0, 3.5, 9.0, 19.0, 60.0}) {
    const boost::math::students_t dist(df);
    for (double t : {0.1, 0.7, 1.5, 3.0, 6.0, 12.0}) {
      const double sf = *StudentTSf(t, df);
      EXPECT_NEAR(sf, IntegratedSf(t, df), 1e-9) << t << " " << df;
      EXPECT_NEAR(sf, boost::math::cdf(boost::math::complement(dist, t)),
                  1e-10)
          << t << " " << df;
    }
  }
}

TEST(StudentTSfTest, AntisymmetricAndMonotone) {
  SeededRandom rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double t = 20.0 * rng.Uniform() - 10.0;
    const double df = 1.0 + 99.0 * rng.Uniform();
    EXPECT_NEAR(*StudentTSf(t, df) + *StudentTSf(-t, df), 1.0, 1e-12);
  }
  double prev = 1.0;
  for (double t = -8.0; t <= 8.0; t += 0.25) {
    const double sf = *StudentTSf(t, 7.0);
    EXPECT_LT(sf, prev);
    prev = sf;
  }
}

TEST(StudentTSfTest, Errors) {
  EXPECT_FALSE(StudentTSf(1.0, 0.0).ok());
  EXPECT_FALSE(StudentTSf(1.0, -2.0).ok());
  EXPECT_FALSE(StudentTSf(std::nan(""), 3.0).ok());
}

TEST(RegularizedIncompleteBetaTest, KnownValues) {
  EXPECT_DOUBLE_EQ(RegularizedIncompleteBeta(0.0, 2.0, 3.0), 0.0);
  EXPECT_DOUBLE_EQ(RegularizedIncompleteBeta(1.0, 2.0, 3.0), 1.0);
  // I_x(1, 1) = x; I_x(a, 1) = x^a.
  EXPECT_NEAR(RegularizedIncompleteBeta(0.3, 1.0, 1.0), 0.3, 1e-14);
  EXPECT_NEAR(RegularizedIncompleteBeta(0.4, 3.0, 1.0), 0.064, 1e-14);
  EXPECT_NEAR(RegularizedIncompleteBeta(0.7, 2.5, 4.0),
              boost::math::ibeta(2.5, 4.0, 0.7), 1e-13);
}

TEST(PairedTTestTest, IdenticalGroups) {
  const std::vector<double> x = {1, 5, 2, 8};
  auto r = PairedTTest(x, x);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->t_stat, 0.0);
  EXPECT_EQ(r->p_two_tailed, 1.0);
  EXPECT_EQ(r->direction, Direction::kNone);
  EXPECT_EQ(r->mean_diff, 0.0);
}

TEST(PairedTTestTest, SmallExample) {
  auto r = PairedTTest(std::vector<double>{1, 2, 3},
                       std::vector<double>{2, 4, 6});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->t_stat, 3.4641, 1e-4);
  EXPECT_EQ(r->df, 2);
  // Oracle: twice the integrated tail at t = 2 * sqrt(3).
  EXPECT_NEAR(r->p_two_tailed, 0.0742, 5e-4);
  EXPECT_NEAR(r->p_two_tailed, 2.0 * IntegratedSf(2.0 * std::sqrt(3.0), 2.0),
              1e-9);
  EXPECT_EQ(r->direction, Direction::kIncrease);
}

TEST(PairedTTestTest, Saturated) {
  auto r = PairedTTest(std::vector<double>{1, 2, 3},
                       std::vector<double>{2, 3, 4});
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->saturated);
  EXPECT_EQ(r->p_two_tailed, 0.0);
  EXPECT_TRUE(std::isinf(r->t_stat) && r->t_stat > 0);
}

TEST(PairedTTestTest, Errors) {
  EXPECT_FALSE(PairedTTest(std::vector<double>{1, 2},
                           std::vector<double>{1, 2, 3})
                   .ok());
  EXPECT_FALSE(
      PairedTTest(std::vector<double>{1}, std::vector<double>{2}).ok());
}

TEST(PairedTTestTest, Properties) {
  SeededRandom rng(5);
  std::vector<double> x(20), y(20);
  for (int i = 0; i < 20; ++i) {
    x[i] = 80 + 5 * rng.Gaussian();
    y[i] = x[i] + 1 + 2 * rng.Gaussian();
  }
  auto xy = PairedTTest(x, y);
  auto yx = PairedTTest(y, x);
  ASSERT_TRUE(xy.ok() && yx.ok());
  EXPECT_EQ(xy->t_stat, -yx->t_stat);
  EXPECT_EQ(xy->p_two_tailed, yx->p_two_tailed);
  EXPECT_GE(xy->p_two_tailed, 0.0);
  EXPECT_LE(xy->p_two_tailed, 1.0);

  // Shifting both groups is bit-identical when the shifted values are
  // exact, so quantize to 1/64 first.
  std::vector<double> xq = x, yq = y;
  for (auto& v : xq) v = std::round(v * 64.0) / 64.0;
  for (auto& v : yq) v = std::round(v * 64.0) / 64.0;
  std::vector<double> xs = xq, ys = yq;
  for (auto& v : xs) v += 64.0;
  for (auto& v : ys) v += 64.0;
  auto base = PairedTTest(xq, yq);
  auto shifted = PairedTTest(xs, ys);
  ASSERT_TRUE(base.ok() && shifted.ok());
  EXPECT_EQ(*shifted, *base);

  std::vector<double> yc = y;
  for (auto& v : yc) v += 3.0;
  auto moved = PairedTTest(x, yc);
  ASSERT_TRUE(moved.ok());
  EXPECT_NEAR(moved->mean_diff, xy->mean_diff + 3.0, 1e-12);
  EXPECT_GT(moved->t_stat, xy->t_stat);
}

TEST(SignedRankTestTest, ExactSmallSample) {
  // Differences 1..6, all positive: W+ = 21, P(W+ >= 21) = 1/64.
  const std::vector<double> x(6, 0.0);
  const std::vector<double> y = {1, 2, 3, 4, 5, 6};
  auto r = SignedRankTest(x, y);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->p_two_tailed, 2.0 / 64.0, 1e-12);
  EXPECT_EQ(r->direction, Direction::kIncrease);
  EXPECT_EQ(r->method, PairedTestMethod::kSignedRank);
}

TEST(SignedRankTestTest, AllZeroDifferences) {
  const std::vector<double> x = {1, 2, 3};
  auto r = SignedRankTest(x, x);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->p_two_tailed, 1.0);
  EXPECT_EQ(r->direction, Direction::kNone);
}

TEST(PairedTestMethodTest, Names) {
  EXPECT_EQ(*ParsePairedTestMethod("paired-t"), PairedTestMethod::kStudentT);
  EXPECT_EQ(*ParsePairedTestMethod("wilcoxon"),
            PairedTestMethod::kSignedRank);
  EXPECT_FALSE(ParsePairedTestMethod("anova").ok());
}

TEST(CompensatedMeanTest, OrderInvariantOnHardInput) {
  std::vector<double> v = {1e16, 1.0, -1e16, 1.0, 3.0};
  EXPECT_EQ(CompensatedSum(v), 5.0);
  std::reverse(v.begin(), v.end());
  EXPECT_EQ(CompensatedSum(v), 5.0);
  EXPECT_EQ(SampleStdDev(std::vector<double>{2.0}), 0.0);
  EXPECT_NEAR(SampleStdDev(std::vector<double>{1, 2, 3, 4}),
              std::sqrt(5.0 / 3.0), 1e-15);
}

}  // namespace
}  // namespace lombard
