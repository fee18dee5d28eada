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

#ifndef LOMBARD_NOISE_H_
#define LOMBARD_NOISE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "lombard/audio.h"

namespace lombard {

enum class NoiseKind { kSsn, kBabble, kExternal };

absl::StatusOr<NoiseKind> ParseNoiseKind(absl::string_view name);
absl::string_view NoiseKindName(NoiseKind kind);

// Third-octave band levels relative to the loudest band. Levels are band
// powers (integrated over each band), not spectral densities.
struct SpectrumEnvelope {
  std::vector<double> band_centers_hz;
  std::vector<double> band_levels_db;
};

// Centers strictly increasing, levels finite, at least 8 bands.
absl::Status ValidateEnvelope(const SpectrumEnvelope& envelope);

// Nominal third-octave centers 1000 * 2^(k/3) from 125 Hz to 8 kHz.
std::vector<double> ThirdOctaveCenters();

// Generic long-term speech spectrum used when no corpus is available:
// broad maximum around 300-400 Hz, falling roughly 5 dB per octave above.
SpectrumEnvelope DefaultSpeechEnvelope();

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kSsn;
  double level_dba = 65.0;
  uint64_t seed = 0;
  double duration_seconds = 1.0;
};

absl::Status ValidateNoiseSpec(const NoiseSpec& spec);

// One-sided Welch power spectral density (Hann window, 50% overlap) pooled
// over every segment of every signal. All signals must share a rate.
struct PowerSpectrum {
  std::vector<double> density;  // per bin, power per Hz
  double bin_hz = 0.0;
  int sample_rate = 0;
};

absl::StatusOr<PowerSpectrum> WelchPsd(std::span<const AudioSignal> signals,
                                       size_t segment_length = 4096);

// Integrates a PSD into third-octave band powers at `centers`, counting
// fractional bin overlap at band edges, and returns them in dB (floored
// 300 dB below the loudest band). Bands above Nyquist are dropped.
SpectrumEnvelope IntegrateThirdOctaves(const PowerSpectrum& psd,
                                       const std::vector<double>& centers);

// Long-term average spectrum of a corpus, 4096-point Welch, third-octave
// bands 125 Hz - 8 kHz, normalized so the loudest band is 0 dB. Logs a
// warning when the corpus holds less than 10 s of active speech.
absl::StatusOr<SpectrumEnvelope> EstimateLtass(
    std::span<const AudioSignal> corpus);

// Gaussian white noise shaped in the frequency domain so that its
// third-octave band powers follow `envelope`, then scaled to
// spec.level_dba. Deterministic in spec.seed.
absl::StatusOr<AudioSignal> GenerateSsn(const SpectrumEnvelope& envelope,
                                        const NoiseSpec& spec,
                                        const CalibrationRef& cal,
                                        int sample_rate);

struct BabbleOptions {
  int n_talkers = 20;
  // When false every talker starts at offset 0.
  bool randomize_offsets = true;
};

// Sums n_talkers streams drawn with replacement, each normalized to unit
// active-frame RMS and circularly shifted by a seeded offset, then scales
// the sum to spec.level_dba. Output length is spec.duration_seconds.
absl::StatusOr<AudioSignal> AssembleBabble(
    std::span<const AudioSignal> streams, const NoiseSpec& spec,
    const CalibrationRef& cal, const BabbleOptions& options = {});

struct Mixture {
  AudioSignal mixture;
  AudioSignal speech;  // scaled speech component
  AudioSignal noise;   // trimmed, scaled noise component
};

// Scales speech and the first speech.size() samples of noise to their
// A-weighted targets and sums them.
absl::StatusOr<Mixture> MixAtLevels(const AudioSignal& speech,
                                    const AudioSignal& noise,
                                    double speech_level_dba,
                                    double noise_level_dba,
                                    const CalibrationRef& cal);

// CSV with a `center_hz,level_db` header.
std::string EnvelopeToCsv(const SpectrumEnvelope& envelope);
absl::StatusOr<SpectrumEnvelope> EnvelopeFromCsv(absl::string_view csv);
absl::StatusOr<SpectrumEnvelope> LoadEnvelopeCsv(
    const std::filesystem::path& path);
absl::Status SaveEnvelopeCsv(const SpectrumEnvelope& envelope,
                             const std::filesystem::path& path);

}  // namespace lombard

#endif  // LOMBARD_NOISE_H_
