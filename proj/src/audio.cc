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

#include "lombard/audio.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "absl/strings/str_format.h"
#include "lombard/fft.h"

namespace lombard {
namespace {

constexpr double kPole1 = 20.598997;
constexpr double kPole2 = 107.65265;
constexpr double kPole3 = 737.86223;
constexpr double kPole4 = 12194.217;

double AWeightingRatio(double f) {
  const double f2 = f * f;
  return (kPole4 * kPole4 * f2 * f2) /
         ((f2 + kPole1 * kPole1) *
          std::sqrt((f2 + kPole2 * kPole2) * (f2 + kPole3 * kPole3)) *
          (f2 + kPole4 * kPole4));
}

// Frame boundaries for activity detection.
size_t ActivityFrameLength(const AudioSignal& signal,
                           const ActivityOptions& options) {
  const auto len = static_cast<size_t>(
      std::lround(options.frame_seconds * signal.sample_rate));
  return std::clamp<size_t>(len, 1, std::max<size_t>(signal.size(), 1));
}

}  // namespace

absl::Status ValidateSignal(const AudioSignal& signal) {
  if (signal.sample_rate <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample rate must be positive, got %d",
                        signal.sample_rate));
  }
  if (signal.samples.empty()) {
    return absl::InvalidArgumentError("signal has no samples");
  }
  for (size_t i = 0; i < signal.samples.size(); ++i) {
    if (!std::isfinite(signal.samples[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("non-finite sample at index %d", i));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateCalibration(const CalibrationRef& cal) {
  if (!std::isfinite(cal.dbfs_to_spl_offset)) {
    return absl::InvalidArgumentError("calibration offset must be finite");
  }
  return absl::OkStatus();
}

AudioSignal Scaled(const AudioSignal& signal, double gain) {
  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples.resize(signal.size());
  std::transform(signal.samples.begin(), signal.samples.end(),
                 out.samples.begin(), [gain](double x) { return gain * x; });
  return out;
}

double Rms(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double x : samples) sum += x * x;
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

double AWeightingDb(double frequency_hz) {
  if (frequency_hz <= 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(AWeightingRatio(frequency_hz) /
                           AWeightingRatio(1000.0));
}

absl::StatusOr<double> AWeightedLevel(const AudioSignal& signal,
                                      const CalibrationRef& cal) {
  if (auto s = ValidateSignal(signal); !s.ok()) return s;
  if (auto s = ValidateCalibration(cal); !s.ok()) return s;
  if (signal.sample_rate < 8000) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "A-weighting needs a sample rate of at least 8000 Hz, got %d",
        signal.sample_rate));
  }
  const size_t n = NextFastFftSize(signal.size());
  const auto spectrum = RealFft(signal.samples, n);
  const double reference = AWeightingRatio(1000.0);
  const double bin_hz = static_cast<double>(signal.sample_rate) / n;
  double weighted_energy = 0.0;
  for (size_t k = 1; k < spectrum.size(); ++k) {
    const double w = AWeightingRatio(k * bin_hz) / reference;
    // Interior bins stand for a conjugate pair.
    const double multiplicity = (2 * k == n) ? 1.0 : 2.0;
    weighted_energy += multiplicity * w * w * std::norm(spectrum[k]);
  }
  weighted_energy /= static_cast<double>(n);
  const double rms_w =
      std::sqrt(weighted_energy / static_cast<double>(signal.size()));
  if (rms_w < kMeasurementFloorRms) return kBelowMeasurementFloor;
  return 20.0 * std::log10(rms_w) + cal.dbfs_to_spl_offset;
}

absl::StatusOr<AudioSignal> ScaleToLevel(const AudioSignal& signal,
                                         double target_dba,
                                         const CalibrationRef& cal) {
  if (!std::isfinite(target_dba)) {
    return absl::InvalidArgumentError("target level must be finite");
  }
  auto level = AWeightedLevel(signal, cal);
  if (!level.ok()) return level.status();
  if (IsBelowMeasurementFloor(*level)) {
    return absl::FailedPreconditionError(
        "cannot scale a silent signal to a target level");
  }
  return Scaled(signal, std::pow(10.0, (target_dba - *level) / 20.0));
}

double ActiveFrameRms(const AudioSignal& signal,
                      const ActivityOptions& options) {
  if (signal.samples.empty()) return 0.0;
  const size_t frame = ActivityFrameLength(signal, options);
  const size_t n_frames = std::max<size_t>(signal.size() / frame, 1);
  std::vector<double> energy(n_frames, 0.0);
  std::vector<size_t> count(n_frames, 0);
  for (size_t f = 0; f < n_frames; ++f) {
    const size_t begin = f * frame;
    const size_t end = (f + 1 == n_frames && n_frames == 1)
                           ? signal.size()
                           : std::min(begin + frame, signal.size());
    for (size_t i = begin; i < end; ++i) {
      energy[f] += signal.samples[i] * signal.samples[i];
    }
    count[f] = end - begin;
  }
  double loudest = 0.0;
  for (size_t f = 0; f < n_frames; ++f) {
    loudest = std::max(loudest, energy[f] / count[f]);
  }
  if (loudest <= 0.0) return 0.0;
  const double threshold =
      loudest * std::pow(10.0, -options.dynamic_range_db / 10.0);
  double active_energy = 0.0;
  size_t active_samples = 0;
  for (size_t f = 0; f < n_frames; ++f) {
    if (energy[f] / count[f] >= threshold) {
      active_energy += energy[f];
      active_samples += count[f];
    }
  }
  return std::sqrt(active_energy / static_cast<double>(active_samples));
}

absl::StatusOr<double> MatchRmsGain(const AudioSignal& source,
                                    const AudioSignal& reference,
                                    const ActivityOptions& options) {
  if (auto s = ValidateSignal(source); !s.ok()) return s;
  if (auto s = ValidateSignal(reference); !s.ok()) return s;
  const double source_rms = ActiveFrameRms(source, options);
  const double reference_rms = ActiveFrameRms(reference, options);
  if (source_rms < kMeasurementFloorRms) {
    return absl::FailedPreconditionError("energy matching: source is silent");
  }
  if (reference_rms < kMeasurementFloorRms) {
    return absl::FailedPreconditionError(
        "energy matching: reference is silent");
  }
  return reference_rms / source_rms;
}

absl::StatusOr<AudioSignal> MatchRms(const AudioSignal& source,
                                     const AudioSignal& reference,
                                     const ActivityOptions& options) {
  auto gain = MatchRmsGain(source, reference, options);
  if (!gain.ok()) return gain.status();
  return Scaled(source, *gain);
}

}  // namespace lombard
