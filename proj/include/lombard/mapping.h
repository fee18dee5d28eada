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

#ifndef LOMBARD_MAPPING_H_
#define LOMBARD_MAPPING_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace lombard {

// Logistic map from a STOI score d to word correct rate in percent:
//   wcr(d) = 100 / (1 + exp(a * d + b)).
struct MappingParams {
  double a = -10.88;
  double b = 6.12;
};

// Pooled SSN/babble fit for Mandarin Lombard speech; the default set.
inline constexpr absl::string_view kDefaultMappingPreset =
    "mandarin-lombard-2024";

absl::StatusOr<MappingParams> MappingPreset(absl::string_view name);

struct ObservationPair {
  double d = 0.0;
  double wcr = 0.0;
};

struct FitReport {
  MappingParams params;
  double rmse = 0.0;  // WCR percentage points
  double rho = 0.0;   // Pearson(predicted, observed)
  // False when either predictions or observations have zero variance; rho
  // is then reported as 0.
  bool rho_defined = true;
  int iterations = 0;
  bool converged = true;
};

double MapStoiToWcr(double d, const MappingParams& params);

absl::Status ValidatePairs(std::span<const ObservationPair> pairs);

struct FitOptions {
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
  // Clamp applied to observed WCR for the logit-linear starting point only.
  double init_clamp_low = 0.5;
  double init_clamp_high = 99.5;
};

// Least-squares (a, b) by Levenberg-Marquardt with an analytic Jacobian,
// started from ordinary least squares on the logit ln(100 / wcr - 1).
// Pairs are sorted internally, so the result does not depend on input
// order. Needs >= 3 pairs with at least two distinct d values.
absl::StatusOr<FitReport> FitMapping(std::span<const ObservationPair> pairs,
                                     const FitOptions& options = {});

// RMSE and correlation of `params` on `pairs` (>= 2 pairs).
absl::StatusOr<FitReport> EvaluateFit(std::span<const ObservationPair> pairs,
                                      const MappingParams& params);

// Gradient of the half sum of squared residuals with respect to (a, b).
std::pair<double, double> CostGradient(std::span<const ObservationPair> pairs,
                                       const MappingParams& params);

// `stoi,wcr` rows; a header line is optional.
absl::StatusOr<std::vector<ObservationPair>> PairsFromCsv(
    absl::string_view csv);
absl::StatusOr<std::vector<ObservationPair>> LoadPairsCsv(
    const std::filesystem::path& path);

// {"a":..,"b":..,"rmse":..,"rho":..} plus fit diagnostics.
std::string FitReportToJson(const FitReport& report);
// Accepts the document above or a bare {"a":..,"b":..}.
absl::StatusOr<MappingParams> MappingParamsFromJson(absl::string_view json);

}  // namespace lombard

#endif  // LOMBARD_MAPPING_H_
