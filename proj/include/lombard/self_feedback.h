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

#ifndef LOMBARD_SELF_FEEDBACK_H_
#define LOMBARD_SELF_FEEDBACK_H_

#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "lombard/audio.h"

namespace lombard {

// What the talker hears of their own voice: an air-conducted copy plus a
// low-passed bone-conducted copy.
struct FeedbackParams {
  double air_gain = 1.0;
  double bone_gain = 1.0;
  double bone_cutoff_hz = 1000.0;
};

absl::Status ValidateFeedbackParams(const FeedbackParams& params,
                                    int sample_rate);

// Normalized second-order section, a0 == 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// Butterworth (Q = 1/sqrt(2)) low-pass via the bilinear transform.
Biquad ButterworthLowPass(double cutoff_hz, int sample_rate);

// Zero-phase forward-backward filtering with odd-reflection padding and
// steady-state initial conditions, so a constant input passes unchanged.
// The effective magnitude response is |H|^2.
std::vector<double> FiltFilt(const Biquad& section,
                             const std::vector<double>& x);

// output = air_gain * x + bone_gain * LP(x), LP applied zero-phase so both
// paths stay aligned. Output length equals input length.
absl::StatusOr<AudioSignal> ApplySelfFeedback(const AudioSignal& signal,
                                              const FeedbackParams& params);

}  // namespace lombard

#endif  // LOMBARD_SELF_FEEDBACK_H_
