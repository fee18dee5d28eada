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

#ifndef LOMBARD_AUDIO_H_
#define LOMBARD_AUDIO_H_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace lombard {

// Mono waveform. Samples are digital amplitude, nominally in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Binds digital RMS to acoustic level: a full-scale (0 dBFS RMS) signal is
// presented at `dbfs_to_spl_offset` dB SPL.
struct CalibrationRef {
  double dbfs_to_spl_offset = 100.0;
};

// Returned by AWeightedLevel when the weighted RMS is below 1e-10.
inline constexpr double kBelowMeasurementFloor =
    -std::numeric_limits<double>::infinity();
inline constexpr double kMeasurementFloorRms = 1e-10;

inline bool IsBelowMeasurementFloor(double level_dba) {
  return level_dba == kBelowMeasurementFloor;
}

// Checks sample_rate > 0, length >= 1 and that every sample is finite.
absl::Status ValidateSignal(const AudioSignal& signal);
absl::Status ValidateCalibration(const CalibrationRef& cal);

AudioSignal Scaled(const AudioSignal& signal, double gain);

double Rms(std::span<const double> samples);
inline double Rms(const AudioSignal& signal) { return Rms(signal.samples); }

// Analytic IEC 61672 A-weighting magnitude in dB, normalized to exactly
// 0 dB at 1 kHz.
double AWeightingDb(double frequency_hz);

// A-weighted level in dBA. The weighting is applied to the signal's power
// spectrum (zero-padded FFT, Parseval) using the analytic curve, so the
// result has no filter warping or start-up transient. Requires
// sample_rate >= 8000.
absl::StatusOr<double> AWeightedLevel(const AudioSignal& signal,
                                      const CalibrationRef& cal);

// Pure gain so that AWeightedLevel(result) == target_dba.
absl::StatusOr<AudioSignal> ScaleToLevel(const AudioSignal& signal,
                                         double target_dba,
                                         const CalibrationRef& cal);

// Speech-activity framing used for energy matching: non-overlapping frames
// of 256 samples at 10 kHz (scaled to the signal's rate); frames more than
// `dynamic_range_db` below the loudest frame are ignored.
struct ActivityOptions {
  double frame_seconds = 256.0 / 10000.0;
  double dynamic_range_db = 40.0;
};

// RMS over active frames only. Returns 0 for an all-zero signal.
double ActiveFrameRms(const AudioSignal& signal,
                      const ActivityOptions& options = {});

// Gain that makes ActiveFrameRms(source) equal ActiveFrameRms(reference).
absl::StatusOr<double> MatchRmsGain(const AudioSignal& source,
                                    const AudioSignal& reference,
                                    const ActivityOptions& options = {});

absl::StatusOr<AudioSignal> MatchRms(const AudioSignal& source,
                                     const AudioSignal& reference,
                                     const ActivityOptions& options = {});

}  // namespace lombard

#endif  // LOMBARD_AUDIO_H_
