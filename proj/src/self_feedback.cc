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

#include "lombard/self_feedback.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"

namespace lombard {
namespace {

// Transposed direct form II, starting from state (z1, z2).
void FilterInPlace(const Biquad& s, std::vector<double>& x, double z1,
                   double z2) {
  for (double& v : x) {
    const double in = v;
    const double out = s.b0 * in + z1;
    z1 = s.b1 * in - s.a1 * out + z2;
    z2 = s.b2 * in - s.a2 * out;
    v = out;
  }
}

// State for which a unit step input produces a steady unit-DC-gain output
// from the first sample.
void SteadyState(const Biquad& s, double* z1, double* z2) {
  const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  *z2 = s.b2 - s.a2 * dc;
  *z1 = s.b1 - s.a1 * dc + *z2;
}

}  // namespace

absl::Status ValidateFeedbackParams(const FeedbackParams& params,
                                    int sample_rate) {
  if (!(params.air_gain >= 0.0) || !(params.bone_gain >= 0.0) ||
      !std::isfinite(params.air_gain) || !std::isfinite(params.bone_gain)) {
    return absl::InvalidArgumentError(
        "feedback gains must be finite and non-negative");
  }
  if (!(params.bone_cutoff_hz > 0.0) ||
      !(params.bone_cutoff_hz < sample_rate / 2.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bone cutoff %g Hz must lie in (0, %g) Hz", params.bone_cutoff_hz,
        sample_rate / 2.0));
  }
  return absl::OkStatus();
}

Biquad ButterworthLowPass(double cutoff_hz, int sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / std::numbers::sqrt2;
  const double cosw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  Biquad s;
  s.b0 = (1.0 - cosw) / 2.0 / a0;
  s.b1 = (1.0 - cosw) / a0;
  s.b2 = s.b0;
  s.a1 = -2.0 * cosw / a0;
  s.a2 = (1.0 - alpha) / a0;
  return s;
}

std::vector<double> FiltFilt(const Biquad& section,
                             const std::vector<double>& x) {
  const size_t n = x.size();
  if (n == 0) return {};
  const size_t pad = std::min<size_t>(9, n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (size_t i = 1; i <= pad; ++i) {
    ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);
  }
  double zi1, zi2;
  SteadyState(section, &zi1, &zi2);
  FilterInPlace(section, ext, zi1 * ext.front(), zi2 * ext.front());
  std::reverse(ext.begin(), ext.end());
  FilterInPlace(section, ext, zi1 * ext.front(), zi2 * ext.front());
  std::reverse(ext.begin(), ext.end());
  return std::vector<double>(ext.begin() + pad, ext.begin() + pad + n);
}

absl::StatusOr<AudioSignal> ApplySelfFeedback(const AudioSignal& signal,
                                              const FeedbackParams& params) {
  if (auto s = ValidateSignal(signal); !s.ok()) return s;
  if (auto s = ValidateFeedbackParams(params, signal.sample_rate); !s.ok()) {
    return s;
  }
  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples.resize(signal.size());
  if (params.bone_gain == 0.0) {
    for (size_t i = 0; i < signal.size(); ++i) {
      out.samples[i] = params.air_gain * signal.samples[i];
    }
    return out;
  }
  const std::vector<double> bone = FiltFilt(
      ButterworthLowPass(params.bone_cutoff_hz, signal.sample_rate),
      signal.samples);
  for (size_t i = 0; i < signal.size(); ++i) {
    out.samples[i] =
        params.air_gain * signal.samples[i] + params.bone_gain * bone[i];
  }
  return out;
}

}  // namespace lombard
