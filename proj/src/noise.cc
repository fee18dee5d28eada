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

#include "lombard/noise.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "lombard/fft.h"
#include "lombard/log.h"
#include "lombard/random.h"

namespace lombard {
namespace {

const double kHalfBandRatio = std::pow(2.0, 1.0 / 6.0);

double BandWidth(double center) {
  return center * (kHalfBandRatio - 1.0 / kHalfBandRatio);
}

std::vector<double> HannWindow(size_t n) {
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

double ActiveSeconds(const AudioSignal& signal) {
  const auto frame = static_cast<size_t>(
      std::max<long>(1, std::lround(0.0256 * signal.sample_rate)));
  const size_t n_frames = signal.size() / frame;
  if (n_frames == 0) return signal.duration_seconds();
  std::vector<double> energy(n_frames, 0.0);
  for (size_t f = 0; f < n_frames; ++f) {
    for (size_t i = f * frame; i < (f + 1) * frame; ++i) {
      energy[f] += signal.samples[i] * signal.samples[i];
    }
  }
  const double loudest = *std::max_element(energy.begin(), energy.end());
  if (loudest <= 0.0) return 0.0;
  const size_t active = std::count_if(
      energy.begin(), energy.end(),
      [loudest](double e) { return e >= loudest * 1e-4; });
  return static_cast<double>(active * frame) / signal.sample_rate;
}

// Density (dB re 1/Hz) at frequency f, linear in (log2 f, dB) between band
// centers and held beyond the outermost bands.
class DensityInterpolator {
 public:
  explicit DensityInterpolator(const SpectrumEnvelope& envelope) {
    for (size_t i = 0; i < envelope.band_centers_hz.size(); ++i) {
      log_centers_.push_back(std::log2(envelope.band_centers_hz[i]));
      density_db_.push_back(envelope.band_levels_db[i] -
                            10.0 * std::log10(BandWidth(
                                       envelope.band_centers_hz[i])));
    }
  }

  double operator()(double f) const {
    const double lf = std::log2(f);
    if (lf <= log_centers_.front()) return density_db_.front();
    if (lf >= log_centers_.back()) return density_db_.back();
    const auto it =
        std::upper_bound(log_centers_.begin(), log_centers_.end(), lf);
    const size_t hi = static_cast<size_t>(it - log_centers_.begin());
    const size_t lo = hi - 1;
    const double t =
        (lf - log_centers_[lo]) / (log_centers_[hi] - log_centers_[lo]);
    return density_db_[lo] + t * (density_db_[hi] - density_db_[lo]);
  }

 private:
  std::vector<double> log_centers_;
  std::vector<double> density_db_;
};

}  // namespace

absl::StatusOr<NoiseKind> ParseNoiseKind(absl::string_view name) {
  const std::string lower = absl::AsciiStrToLower(name);
  if (lower == "ssn") return NoiseKind::kSsn;
  if (lower == "babble") return NoiseKind::kBabble;
  if (lower == "external") return NoiseKind::kExternal;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown noise kind '%s'", name));
}

absl::string_view NoiseKindName(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kSsn:
      return "ssn";
    case NoiseKind::kBabble:
      return "babble";
    case NoiseKind::kExternal:
      return "external";
  }
  return "?";
}

absl::Status ValidateEnvelope(const SpectrumEnvelope& envelope) {
  const auto& c = envelope.band_centers_hz;
  const auto& l = envelope.band_levels_db;
  if (c.size() != l.size()) {
    return absl::InvalidArgumentError(
        "envelope centers and levels differ in length");
  }
  if (c.size() < 8) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "envelope needs at least 8 bands, got %d", c.size()));
  }
  for (size_t i = 0; i < c.size(); ++i) {
    if (!std::isfinite(c[i]) || c[i] <= 0.0 || !std::isfinite(l[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("envelope band %d is not finite/positive", i));
    }
    if (i > 0 && !(c[i] > c[i - 1])) {
      return absl::InvalidArgumentError(
          "envelope centers must be strictly increasing");
    }
  }
  return absl::OkStatus();
}

std::vector<double> ThirdOctaveCenters() {
  std::vector<double> centers;
  for (int k = -9; k <= 9; ++k) centers.push_back(1000.0 * std::exp2(k / 3.0));
  return centers;
}

SpectrumEnvelope DefaultSpeechEnvelope() {
  SpectrumEnvelope env;
  env.band_centers_hz = ThirdOctaveCenters();
  env.band_levels_db = {-6.0,  -4.0,  -2.0,  -1.0,  0.0,   0.0,  -1.0,
                        -3.0,  -5.0,  -7.0,  -9.0,  -11.0, -12.0, -13.0,
                        -15.0, -17.0, -19.0, -21.0, -24.0};
  return env;
}

absl::Status ValidateNoiseSpec(const NoiseSpec& spec) {
  if (!(spec.level_dba >= 0.0 && spec.level_dba <= 120.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "noise level %g dBA outside [0, 120]", spec.level_dba));
  }
  if (!(spec.duration_seconds > 0.0) || !std::isfinite(spec.duration_seconds)) {
    return absl::InvalidArgumentError("noise duration must be positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<PowerSpectrum> WelchPsd(std::span<const AudioSignal> signals,
                                       size_t segment_length) {
  if (signals.empty()) return absl::InvalidArgumentError("empty corpus");
  const int rate = signals.front().sample_rate;
  for (const AudioSignal& s : signals) {
    if (auto st = ValidateSignal(s); !st.ok()) return st;
    if (s.sample_rate != rate) {
      return absl::InvalidArgumentError(
          "all corpus signals must share one sample rate");
    }
  }
  const std::vector<double> window = HannWindow(segment_length);
  double window_power = 0.0;
  for (double w : window) window_power += w * w;

  PowerSpectrum psd;
  psd.sample_rate = rate;
  psd.bin_hz = static_cast<double>(rate) / segment_length;
  psd.density.assign(segment_length / 2 + 1, 0.0);
  size_t n_segments = 0;
  const size_t hop = segment_length / 2;
  std::vector<double> frame(segment_length);
  for (const AudioSignal& s : signals) {
    size_t start = 0;
    do {
      std::fill(frame.begin(), frame.end(), 0.0);
      const size_t end = std::min(start + segment_length, s.size());
      for (size_t i = start; i < end; ++i) {
        frame[i - start] = s.samples[i] * window[i - start];
      }
      const auto spectrum = RealFft(frame, segment_length);
      for (size_t k = 0; k < spectrum.size(); ++k) {
        const bool edge = k == 0 || 2 * k == segment_length;
        psd.density[k] += (edge ? 1.0 : 2.0) * std::norm(spectrum[k]);
      }
      ++n_segments;
      start += hop;
    } while (start + segment_length <= s.size());
  }
  const double scale = 1.0 / (n_segments * rate * window_power);
  for (double& d : psd.density) d *= scale;
  return psd;
}

SpectrumEnvelope IntegrateThirdOctaves(const PowerSpectrum& psd,
                                       const std::vector<double>& centers) {
  SpectrumEnvelope env;
  const double nyquist = psd.sample_rate / 2.0;
  for (double center : centers) {
    const double lo = center / kHalfBandRatio;
    const double hi = center * kHalfBandRatio;
    if (hi > nyquist) break;
    double power = 0.0;
    const auto first = static_cast<size_t>(std::floor(lo / psd.bin_hz));
    const auto last = static_cast<size_t>(std::ceil(hi / psd.bin_hz)) + 1;
    for (size_t k = first; k <= last && k < psd.density.size(); ++k) {
      const double bin_lo = (k - 0.5) * psd.bin_hz;
      const double bin_hi = (k + 0.5) * psd.bin_hz;
      const double overlap = std::min(hi, bin_hi) - std::max(lo, bin_lo);
      if (overlap > 0.0) power += psd.density[k] * overlap;
    }
    env.band_centers_hz.push_back(center);
    env.band_levels_db.push_back(power);
  }
  const double loudest =
      env.band_levels_db.empty()
          ? 0.0
          : *std::max_element(env.band_levels_db.begin(),
                              env.band_levels_db.end());
  // Relative floor 300 dB below the loudest band keeps levels finite.
  for (double& p : env.band_levels_db) {
    p = loudest > 0.0 ? 10.0 * std::log10(std::max(p, loudest * 1e-30))
                      : -std::numeric_limits<double>::infinity();
  }
  return env;
}

absl::StatusOr<SpectrumEnvelope> EstimateLtass(
    std::span<const AudioSignal> corpus) {
  auto psd = WelchPsd(corpus);
  if (!psd.ok()) return psd.status();
  SpectrumEnvelope env = IntegrateThirdOctaves(*psd, ThirdOctaveCenters());
  const double loudest =
      env.band_levels_db.empty()
          ? -std::numeric_limits<double>::infinity()
          : *std::max_element(env.band_levels_db.begin(),
                              env.band_levels_db.end());
  if (!std::isfinite(loudest)) {
    return absl::FailedPreconditionError("corpus is silent");
  }
  for (double& level : env.band_levels_db) level -= loudest;
  if (auto s = ValidateEnvelope(env); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample rate %d Hz too low for a third-octave LTASS: %s",
        psd->sample_rate, s.message()));
  }
  double active = 0.0;
  for (const AudioSignal& s : corpus) active += ActiveSeconds(s);
  if (active < 10.0) {
    LogWarning(absl::StrFormat(
        "LTASS estimated from only %.1f s of active signal (10 s advised)",
        active));
  }
  return env;
}

absl::StatusOr<AudioSignal> GenerateSsn(const SpectrumEnvelope& envelope,
                                        const NoiseSpec& spec,
                                        const CalibrationRef& cal,
                                        int sample_rate) {
  if (spec.kind != NoiseKind::kSsn) {
    return absl::InvalidArgumentError("GenerateSsn needs a kSsn spec");
  }
  if (auto s = ValidateNoiseSpec(spec); !s.ok()) return s;
  if (auto s = ValidateEnvelope(envelope); !s.ok()) return s;
  if (sample_rate < 8000) {
    return absl::InvalidArgumentError("SSN needs a rate of at least 8000 Hz");
  }
  const auto n = static_cast<size_t>(
      std::max(1L, std::lround(spec.duration_seconds * sample_rate)));
  const size_t n_fft = NextFastFftSize(n);
  SeededRandom rng(spec.seed);
  std::vector<double> white(n_fft);
  for (double& v : white) v = rng.Gaussian();
  auto spectrum = RealFft(white, n_fft);
  const DensityInterpolator density(envelope);
  const double bin_hz = static_cast<double>(sample_rate) / n_fft;
  spectrum[0] = 0.0;
  for (size_t k = 1; k < spectrum.size(); ++k) {
    spectrum[k] *= std::pow(10.0, density(k * bin_hz) / 20.0);
  }
  std::vector<double> shaped = InverseRealFft(spectrum, n_fft);
  shaped.resize(n);
  AudioSignal out{std::move(shaped), sample_rate};
  return ScaleToLevel(out, spec.level_dba, cal);
}

absl::StatusOr<AudioSignal> AssembleBabble(
    std::span<const AudioSignal> streams, const NoiseSpec& spec,
    const CalibrationRef& cal, const BabbleOptions& options) {
  if (streams.empty()) {
    return absl::InvalidArgumentError("babble needs at least one stream");
  }
  if (options.n_talkers < 2) {
    return absl::InvalidArgumentError("babble needs at least two talkers");
  }
  if (auto s = ValidateNoiseSpec(spec); !s.ok()) return s;
  const int rate = streams.front().sample_rate;
  std::vector<double> inverse_rms;
  for (const AudioSignal& s : streams) {
    if (auto st = ValidateSignal(s); !st.ok()) return st;
    if (s.sample_rate != rate) {
      return absl::InvalidArgumentError(
          "babble streams must share one sample rate");
    }
    const double rms = ActiveFrameRms(s);
    if (rms < kMeasurementFloorRms) {
      return absl::FailedPreconditionError("babble stream is silent");
    }
    inverse_rms.push_back(1.0 / rms);
  }
  const auto n = static_cast<size_t>(
      std::max(1L, std::lround(spec.duration_seconds * rate)));
  AudioSignal out{std::vector<double>(n, 0.0), rate};
  SeededRandom rng(spec.seed);
  for (int t = 0; t < options.n_talkers; ++t) {
    const size_t pick = rng.UniformIndex(streams.size());
    const AudioSignal& s = streams[pick];
    const size_t offset =
        options.randomize_offsets ? rng.UniformIndex(s.size()) : 0;
    const double g = inverse_rms[pick];
    for (size_t i = 0; i < n; ++i) {
      out.samples[i] += g * s.samples[(i + offset) % s.size()];
    }
  }
  return ScaleToLevel(out, spec.level_dba, cal);
}

absl::StatusOr<Mixture> MixAtLevels(const AudioSignal& speech,
                                    const AudioSignal& noise,
                                    double speech_level_dba,
                                    double noise_level_dba,
                                    const CalibrationRef& cal) {
  if (auto s = ValidateSignal(speech); !s.ok()) return s;
  if (auto s = ValidateSignal(noise); !s.ok()) return s;
  if (speech.sample_rate != noise.sample_rate) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample rate mismatch: speech %d Hz, noise %d Hz", speech.sample_rate,
        noise.sample_rate));
  }
  if (noise.size() < speech.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "noise (%d samples) shorter than speech (%d samples)", noise.size(),
        speech.size()));
  }
  AudioSignal trimmed{
      std::vector<double>(noise.samples.begin(),
                          noise.samples.begin() + speech.size()),
      noise.sample_rate};
  Mixture mix;
  auto scaled_speech = ScaleToLevel(speech, speech_level_dba, cal);
  if (!scaled_speech.ok()) return scaled_speech.status();
  auto scaled_noise = ScaleToLevel(trimmed, noise_level_dba, cal);
  if (!scaled_noise.ok()) return scaled_noise.status();
  mix.speech = *std::move(scaled_speech);
  mix.noise = *std::move(scaled_noise);
  mix.mixture.sample_rate = speech.sample_rate;
  mix.mixture.samples.resize(speech.size());
  for (size_t i = 0; i < speech.size(); ++i) {
    mix.mixture.samples[i] = mix.speech.samples[i] + mix.noise.samples[i];
  }
  return mix;
}

std::string EnvelopeToCsv(const SpectrumEnvelope& envelope) {
  std::string out = "center_hz,level_db\n";
  for (size_t i = 0; i < envelope.band_centers_hz.size(); ++i) {
    out += absl::StrFormat("%.17g,%.17g\n", envelope.band_centers_hz[i],
                           envelope.band_levels_db[i]);
  }
  return out;
}

absl::StatusOr<SpectrumEnvelope> EnvelopeFromCsv(absl::string_view csv) {
  SpectrumEnvelope env;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(csv, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> cols = absl::StrSplit(line, ',');
    double center, level;
    if (cols.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cols[0]), &center) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cols[1]), &level)) {
      if (env.band_centers_hz.empty() && line_no == 1) continue;  // header
      return absl::InvalidArgumentError(
          absl::StrFormat("envelope CSV line %d: expected center_hz,level_db",
                          line_no));
    }
    env.band_centers_hz.push_back(center);
    env.band_levels_db.push_back(level);
  }
  if (auto s = ValidateEnvelope(env); !s.ok()) return s;
  return env;
}

absl::StatusOr<SpectrumEnvelope> LoadEnvelopeCsv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open envelope %s", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return EnvelopeFromCsv(buffer.str());
}

absl::Status SaveEnvelopeCsv(const SpectrumEnvelope& envelope,
                             const std::filesystem::path& path) {
  if (auto s = ValidateEnvelope(envelope); !s.ok()) return s;
  std::ofstream out(path);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write %s", path.string()));
  }
  out << EnvelopeToCsv(envelope);
  return absl::OkStatus();
}

}  // namespace lombard
