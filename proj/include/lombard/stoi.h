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

#ifndef LOMBARD_STOI_H_
#define LOMBARD_STOI_H_

#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "lombard/audio.h"

namespace lombard {

// Short-time objective intelligibility. Defaults are the standard
// constants of the published measure; change them only for experiments,
// scores are not comparable across configurations.
struct StoiConfig {
  int work_rate = 10000;
  int frame_len = 256;
  int fft_len = 512;
  int n_bands = 15;
  double lowest_center_hz = 150.0;
  int seg_frames = 30;
  double clip_db = -15.0;
  double silence_range_db = 40.0;
};

absl::Status ValidateStoiConfig(const StoiConfig& cfg);

// Rectangular third-octave grouping of FFT bins. Band k has nominal center
// lowest_center * 2^(k/3) and edges center * 2^(+-1/6); each edge is
// snapped to the nearest FFT bin and the band holds bins [first, last).
struct BandMatrix {
  int n_bins = 0;
  std::vector<double> centers_hz;
  std::vector<std::pair<int, int>> bin_ranges;

  int n_bands() const { return static_cast<int>(bin_ranges.size()); }
  double weight(int band, int bin) const {
    const auto& [first, last] = bin_ranges[band];
    return (bin >= first && bin < last) ? 1.0 : 0.0;
  }
};

// Fails when the highest band edge exceeds Nyquist at work_rate.
absl::StatusOr<BandMatrix> ThirdOctaveBank(const StoiConfig& cfg);

// Drops Hann-windowed frames (frame_len, 50% overlap) of `clean` whose
// energy is more than silence_range_db below the loudest clean frame, from
// both signals, and overlap-adds the kept frames. Both inputs must already
// be at one rate and of equal length.
absl::StatusOr<std::pair<AudioSignal, AudioSignal>> RemoveSilentFrames(
    const AudioSignal& clean, const AudioSignal& degraded,
    const StoiConfig& cfg = {});

// Full measure: resample both inputs to work_rate, trim to the shorter one
// (a length difference above 5% is an error), remove silent frames, then
// average clipped short-time envelope correlations over all bands and all
// seg_frames-long sliding segments.
absl::StatusOr<double> Stoi(const AudioSignal& clean,
                            const AudioSignal& degraded,
                            const StoiConfig& cfg = {});

}  // namespace lombard

#endif  // LOMBARD_STOI_H_
