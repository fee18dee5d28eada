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

#ifndef LOMBARD_RESAMPLE_H_
#define LOMBARD_RESAMPLE_H_

#include "absl/status/statusor.h"
#include "lombard/audio.h"

namespace lombard {

struct ResampleOptions {
  // Cutoff as a fraction of the lower of the two Nyquist frequencies.
  double passband = 0.92;
  // Half-length of the windowed-sinc kernel in zero crossings.
  int zero_crossings = 24;
  double kaiser_beta = 8.6;
};

// Rational polyphase resampling with a Kaiser-windowed sinc anti-aliasing
// kernel. Each phase is normalized to unit DC gain and the input is
// extended by holding its edge samples, so constant signals stay constant.
// Output length is ceil(n * target_rate / sample_rate).
absl::StatusOr<AudioSignal> Resample(const AudioSignal& signal,
                                     int target_rate,
                                     const ResampleOptions& options = {});

}  // namespace lombard

#endif  // LOMBARD_RESAMPLE_H_
