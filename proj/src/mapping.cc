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

#include "lombard/mapping.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"

namespace lombard {
namespace {

// f and df/dz at z = a*d + b.
void Logistic(double z, double* f, double* dfdz) {
  double value;
  if (z > 0.0) {
    const double e = std::exp(-z);
    value = 100.0 * e / (1.0 + e);
  } else {
    value = 100.0 / (1.0 + std::exp(z));
  }
  *f = value;
  *dfdz = -value * (1.0 - value / 100.0);
}

double SumSquares(std::span<const ObservationPair> pairs,
                  const MappingParams& p) {
  double s = 0.0;
  for (const auto& pair : pairs) {
    const double r = pair.wcr - MapStoiToWcr(pair.d, p);
    s += r * r;
  }
  return s;
}

double Pearson(const std::vector<double>& x, const std::vector<double>& y,
               bool* defined) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    *defined = false;
    return 0.0;
  }
  *defined = true;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

absl::StatusOr<MappingParams> MappingPreset(absl::string_view name) {
  if (name == kDefaultMappingPreset) return MappingParams{-10.88, 6.12};
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown mapping preset '%s'", name));
}

double MapStoiToWcr(double d, const MappingParams& params) {
  double f, unused;
  Logistic(params.a * d + params.b, &f, &unused);
  return f;
}

absl::Status ValidatePairs(std::span<const ObservationPair> pairs) {
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (!std::isfinite(pairs[i].d)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("pair %d: STOI value is not finite", i));
    }
    if (!(pairs[i].wcr >= 0.0 && pairs[i].wcr <= 100.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("pair %d: WCR %g outside [0, 100]", i, pairs[i].wcr));
    }
  }
  return absl::OkStatus();
}

std::pair<double, double> CostGradient(std::span<const ObservationPair> pairs,
                                       const MappingParams& params) {
  double ga = 0.0, gb = 0.0;
  for (const auto& p : pairs) {
    double f, dfdz;
    Logistic(params.a * p.d + params.b, &f, &dfdz);
    const double r = p.wcr - f;
    // d(0.5 r^2)/dθ = -r df/dθ
    ga -= r * dfdz * p.d;
    gb -= r * dfdz;
  }
  return {ga, gb};
}

absl::StatusOr<FitReport> EvaluateFit(std::span<const ObservationPair> pairs,
                                      const MappingParams& params) {
  if (pairs.size() < 2) {
    return absl::InvalidArgumentError("fit evaluation needs at least 2 pairs");
  }
  if (auto s = ValidatePairs(pairs); !s.ok()) return s;
  std::vector<double> predicted, observed;
  double sse = 0.0;
  for (const auto& p : pairs) {
    const double f = MapStoiToWcr(p.d, params);
    predicted.push_back(f);
    observed.push_back(p.wcr);
    sse += (p.wcr - f) * (p.wcr - f);
  }
  FitReport report;
  report.params = params;
  report.rmse = std::sqrt(sse / pairs.size());
  report.rho = Pearson(predicted, observed, &report.rho_defined);
  return report;
}

absl::StatusOr<FitReport> FitMapping(std::span<const ObservationPair> pairs,
                                     const FitOptions& options) {
  if (pairs.size() < 3) {
    return absl::InvalidArgumentError("mapping fit needs at least 3 pairs");
  }
  if (auto s = ValidatePairs(pairs); !s.ok()) return s;
  std::vector<ObservationPair> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) {
    return l.d != r.d ? l.d < r.d : l.wcr < r.wcr;
  });
  if (sorted.front().d == sorted.back().d) {
    return absl::InvalidArgumentError(
        "mapping fit is degenerate: all STOI values are equal");
  }

  // Logit-linear start.
  const double n = static_cast<double>(sorted.size());
  double sd = 0.0, sy = 0.0, sdd = 0.0, sdy = 0.0;
  for (const auto& p : sorted) {
    const double w =
        std::clamp(p.wcr, options.init_clamp_low, options.init_clamp_high);
    const double y = std::log(100.0 / w - 1.0);
    sd += p.d;
    sy += y;
    sdd += p.d * p.d;
    sdy += p.d * y;
  }
  MappingParams params;
  params.a = (n * sdy - sd * sy) / (n * sdd - sd * sd);
  params.b = (sy - params.a * sd) / n;

  double cost = SumSquares(sorted, params);
  double lambda = 1e-3;
  FitReport report;
  report.converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (cost < 1e-30) {
      report.converged = true;
      break;
    }
    // J holds dr/dθ = -df/dθ; solve (JᵀJ + λ diag JᵀJ) δ = -Jᵀr.
    double jaa = 0.0, jab = 0.0, jbb = 0.0, ga = 0.0, gb = 0.0;
    for (const auto& p : sorted) {
      double f, dfdz;
      Logistic(params.a * p.d + params.b, &f, &dfdz);
      const double r = p.wcr - f;
      const double ja = -dfdz * p.d;
      const double jb = -dfdz;
      jaa += ja * ja;
      jab += ja * jb;
      jbb += jb * jb;
      ga += ja * r;
      gb += jb * r;
    }
    bool accepted = false;
    while (!accepted && lambda < 1e20) {
      const double haa = jaa * (1.0 + lambda);
      const double hbb = jbb * (1.0 + lambda);
      const double det = haa * hbb - jab * jab;
      if (!(std::fabs(det) > 0.0) || !std::isfinite(det)) {
        lambda *= 10.0;
        continue;
      }
      const double da = -(hbb * ga - jab * gb) / det;
      const double db = -(haa * gb - jab * ga) / det;
      const MappingParams trial{params.a + da, params.b + db};
      const double trial_cost = SumSquares(sorted, trial);
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        const double change = (cost - trial_cost) / cost;
        params = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (change < options.relative_tolerance) report.converged = true;
      } else {
        lambda *= 10.0;
      }
    }
    // No descent step at any damping: already at a minimum to precision.
    if (!accepted) report.converged = true;
    if (report.converged) {
      ++iter;
      break;
    }
  }

  auto evaluated = EvaluateFit(sorted, params);
  if (!evaluated.ok()) return evaluated.status();
  evaluated->iterations = iter;
  evaluated->converged = report.converged;
  return evaluated;
}

absl::StatusOr<std::vector<ObservationPair>> PairsFromCsv(
    absl::string_view csv) {
  std::vector<ObservationPair> pairs;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(csv, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> cols = absl::StrSplit(line, ',');
    ObservationPair p;
    if (cols.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cols[0]), &p.d) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cols[1]), &p.wcr)) {
      if (pairs.empty() && line_no == 1) continue;  // header
      return absl::InvalidArgumentError(
          absl::StrFormat("pairs CSV line %d: expected stoi,wcr", line_no));
    }
    pairs.push_back(p);
  }
  if (auto s = ValidatePairs(pairs); !s.ok()) return s;
  return pairs;
}

absl::StatusOr<std::vector<ObservationPair>> LoadPairsCsv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open pairs file %s", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return PairsFromCsv(buffer.str());
}

std::string FitReportToJson(const FitReport& report) {
  nlohmann::json j;
  j["a"] = report.params.a;
  j["b"] = report.params.b;
  j["rmse"] = report.rmse;
  j["rho"] = report.rho;
  j["rho_defined"] = report.rho_defined;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  return j.dump(2);
}

absl::StatusOr<MappingParams> MappingParamsFromJson(absl::string_view json) {
  const auto j =
      nlohmann::json::parse(json, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("a") ||
      !j.contains("b") || !j["a"].is_number() || !j["b"].is_number()) {
    return absl::InvalidArgumentError(
        "mapping JSON must be an object with numeric 'a' and 'b'");
  }
  MappingParams p{j["a"].get<double>(), j["b"].get<double>()};
  if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
    return absl::InvalidArgumentError("mapping parameters must be finite");
  }
  return p;
}

}  // namespace lombard
