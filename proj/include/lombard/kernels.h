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

#ifndef LOMBARD_KERNELS_H_
#define LOMBARD_KERNELS_H_

#include <functional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "lombard/audio.h"
#include "lombard/config.h"
#include "lombard/noise.h"
#include "lombard/stoi.h"

namespace lombard {

// One (speaker, sentence) cell of a level-pair comparison. Pointers are
// borrowed and must outlive the call.
struct Trial {
  const AudioSignal* base_feedback = nullptr;
  const AudioSignal* high_feedback = nullptr;
  // Only read with StoiReference::kRecording.
  const AudioSignal* base_recording = nullptr;
  const AudioSignal* high_recording = nullptr;
  const AudioSignal* noise = nullptr;
  // Prefixed to error messages, e.g. "speaker S1 sentence s03".
  std::string label;
};

struct TrialSettings {
  CalibrationRef calibration;
  StoiConfig stoi;
  PresentationMode presentation = PresentationMode::kEnergy;
  StoiReference reference = StoiReference::kSelfFeedback;
  double noise_level_dba = 65.0;
};

struct TrialMixtures {
  Mixture base;
  Mixture high;
  // Gain from MatchRms applied to the base self-feedback signal.
  double match_gain = 1.0;
};

// Energy-matches the base signal to the high one, then mixes both with the
// same noise at noise_level_dba. In kEnergy mode each speech component keeps
// its own A-weighted level; in kALevel mode both take the high signal's.
absl::StatusOr<TrialMixtures> BuildTrialMixtures(const Trial& trial,
                                                 const TrialSettings& settings);

struct TrialScore {
  double stoi_base = 0.0;
  double stoi_high = 0.0;

  bool operator==(const TrialScore&) const = default;
};

absl::StatusOr<TrialScore> ScoreTrial(const Trial& trial,
                                      const TrialSettings& settings);

// Reference implementation, one trial after another.
absl::StatusOr<std::vector<TrialScore>> ScoreTrialsSerial(
    const std::vector<Trial>& trials, const TrialSettings& settings);

// OpenMP version. Results are stored by index, so the output is identical
// to ScoreTrialsSerial for any thread count. On failure the error of the
// lowest failing index is returned. jobs <= 0 uses the OpenMP default.
absl::StatusOr<std::vector<TrialScore>> ScoreTrialsParallel(
    const std::vector<Trial>& trials, const TrialSettings& settings,
    int jobs = 0);

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads and returns the
// error of the lowest failing index.
absl::Status ParallelFor(size_t n, int jobs,
                         const std::function<absl::Status(size_t)>& fn);

}  // namespace lombard

#endif  // LOMBARD_KERNELS_H_
