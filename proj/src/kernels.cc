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

#include "lombard/kernels.h"

#include <omp.h>

#include <optional>

#include "lombard/status_macros.h"

namespace lombard {

absl::StatusOr<TrialMixtures> BuildTrialMixtures(
    const Trial& trial, const TrialSettings& settings) {
  if (trial.base_feedback == nullptr || trial.high_feedback == nullptr ||
      trial.noise == nullptr) {
    return absl::InvalidArgumentError("trial is missing a signal");
  }
  const AudioSignal& high = *trial.high_feedback;
  TrialMixtures out;
  ASSIGN_OR_RETURN(out.match_gain, MatchRmsGain(*trial.base_feedback, high));
  const AudioSignal base = Scaled(*trial.base_feedback, out.match_gain);

  ASSIGN_OR_RETURN(const double high_level,
                   AWeightedLevel(high, settings.calibration));
  double base_level = high_level;
  if (settings.presentation == PresentationMode::kEnergy) {
    ASSIGN_OR_RETURN(base_level, AWeightedLevel(base, settings.calibration));
  }
  if (IsBelowMeasurementFloor(high_level) ||
      IsBelowMeasurementFloor(base_level)) {
    return absl::FailedPreconditionError("speech below measurement floor");
  }
  ASSIGN_OR_RETURN(out.base,
                   MixAtLevels(base, *trial.noise, base_level,
                               settings.noise_level_dba, settings.calibration));
  ASSIGN_OR_RETURN(out.high,
                   MixAtLevels(high, *trial.noise, high_level,
                               settings.noise_level_dba, settings.calibration));
  return out;
}

absl::StatusOr<TrialScore> ScoreTrial(const Trial& trial,
                                      const TrialSettings& settings) {
  ASSIGN_OR_RETURN(const TrialMixtures mix,
                   BuildTrialMixtures(trial, settings));
  const AudioSignal* base_ref = &mix.base.speech;
  const AudioSignal* high_ref = &mix.high.speech;
  if (settings.reference == StoiReference::kRecording) {
    if (trial.base_recording == nullptr || trial.high_recording == nullptr) {
      return absl::InvalidArgumentError("trial is missing a recording");
    }
    base_ref = trial.base_recording;
    high_ref = trial.high_recording;
  }
  TrialScore score;
  ASSIGN_OR_RETURN(score.stoi_base,
                   Stoi(*base_ref, mix.base.mixture, settings.stoi));
  ASSIGN_OR_RETURN(score.stoi_high,
                   Stoi(*high_ref, mix.high.mixture, settings.stoi));
  return score;
}

namespace {

absl::Status Labeled(const absl::Status& status, const Trial& trial) {
  if (status.ok() || trial.label.empty()) return status;
  return absl::Status(status.code(),
                      trial.label + ": " + std::string(status.message()));
}

}  // namespace

absl::StatusOr<std::vector<TrialScore>> ScoreTrialsSerial(
    const std::vector<Trial>& trials, const TrialSettings& settings) {
  std::vector<TrialScore> scores;
  scores.reserve(trials.size());
  for (const Trial& trial : trials) {
    auto score = ScoreTrial(trial, settings);
    if (!score.ok()) return Labeled(score.status(), trial);
    scores.push_back(*score);
  }
  return scores;
}

absl::Status ParallelFor(size_t n, int jobs,
                         const std::function<absl::Status(size_t)>& fn) {
  std::vector<absl::Status> status(n);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto count = static_cast<int64_t>(n);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int64_t i = 0; i < count; ++i) {
    status[i] = fn(static_cast<size_t>(i));
  }
  for (auto& s : status) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<TrialScore>> ScoreTrialsParallel(
    const std::vector<Trial>& trials, const TrialSettings& settings,
    int jobs) {
  std::vector<TrialScore> scores(trials.size());
  RETURN_IF_ERROR(ParallelFor(trials.size(), jobs, [&](size_t i) {
    auto score = ScoreTrial(trials[i], settings);
    if (!score.ok()) return Labeled(score.status(), trials[i]);
    scores[i] = *score;
    return absl::OkStatus();
  }));
  return scores;
}

}  // namespace lombard
