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

#include "lombard/stoi.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "absl/strings/str_format.h"
#include "lombard/fft.h"
#include "lombard/resample.h"

namespace lombard {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric Hann without the zero end points.
std::vector<double> StoiWindow(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 1) / (n + 1));
  }
  return w;
}

// Frame starts 0, hop, ... strictly below size - frame_len.
size_t FrameCount(size_t size, int frame_len, int hop) {
  if (size <= static_cast<size_t>(frame_len)) return 0;
  return (size - frame_len - 1) / hop + 1;
}

// Band envelopes, laid out [band][frame].
std::vector<std::vector<double>> BandEnvelopes(const std::vector<double>& x,
                                               const StoiConfig& cfg,
                                               const BandMatrix& bands) {
  const int hop = cfg.frame_len / 2;
  const size_t n_frames = FrameCount(x.size(), cfg.frame_len, hop);
  const std::vector<double> window = StoiWindow(cfg.frame_len);
  std::vector<std::vector<double>> env(bands.n_bands(),
                                       std::vector<double>(n_frames));
  std::vector<double> frame(cfg.frame_len);
  for (size_t f = 0; f < n_frames; ++f) {
    for (int i = 0; i < cfg.frame_len; ++i) {
      frame[i] = window[i] * x[f * hop + i];
    }
    const auto spectrum = RealFft(frame, cfg.fft_len);
    for (int b = 0; b < bands.n_bands(); ++b) {
      double power = 0.0;
      for (int k = bands.bin_ranges[b].first; k < bands.bin_ranges[b].second;
           ++k) {
        power += std::norm(spectrum[k]);
      }
      env[b][f] = std::sqrt(power);
    }
  }
  return env;
}

double Norm(const double* v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace

absl::Status ValidateStoiConfig(const StoiConfig& cfg) {
  if (cfg.work_rate <= 0 || cfg.frame_len <= 1 || cfg.fft_len <= 0 ||
      cfg.n_bands < 1 || cfg.seg_frames < 2 || !(cfg.lowest_center_hz > 0) ||
      !(cfg.silence_range_db > 0)) {
    return absl::InvalidArgumentError("STOI config has non-positive fields");
  }
  if (cfg.frame_len > cfg.fft_len) {
    return absl::InvalidArgumentError("STOI frame_len exceeds fft_len");
  }
  if (!std::isfinite(cfg.clip_db)) {
    return absl::InvalidArgumentError("STOI clip_db must be finite");
  }
  return absl::OkStatus();
}

absl::StatusOr<BandMatrix> ThirdOctaveBank(const StoiConfig& cfg) {
  if (auto s = ValidateStoiConfig(cfg); !s.ok()) return s;
  BandMatrix bank;
  bank.n_bins = cfg.fft_len / 2 + 1;
  const double bin_hz = static_cast<double>(cfg.work_rate) / cfg.fft_len;
  const double nyquist = cfg.work_rate / 2.0;
  auto nearest_bin = [&](double f) {
    return static_cast<int>(std::clamp<long>(std::lround(f / bin_hz), 0,
                                             bank.n_bins - 1));
  };
  for (int k = 0; k < cfg.n_bands; ++k) {
    const double low = cfg.lowest_center_hz * std::exp2((2.0 * k - 1) / 6.0);
    const double high = cfg.lowest_center_hz * std::exp2((2.0 * k + 1) / 6.0);
    if (high > nyquist) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "third-octave band %d (upper edge %.1f Hz) exceeds Nyquist %.1f Hz",
          k, high, nyquist));
    }
    bank.centers_hz.push_back(cfg.lowest_center_hz * std::exp2(k / 3.0));
    bank.bin_ranges.emplace_back(nearest_bin(low), nearest_bin(high));
  }
  return bank;
}

absl::StatusOr<std::pair<AudioSignal, AudioSignal>> RemoveSilentFrames(
    const AudioSignal& clean, const AudioSignal& degraded,
    const StoiConfig& cfg) {
  if (auto s = ValidateStoiConfig(cfg); !s.ok()) return s;
  if (auto s = ValidateSignal(clean); !s.ok()) return s;
  if (auto s = ValidateSignal(degraded); !s.ok()) return s;
  if (clean.size() != degraded.size() ||
      clean.sample_rate != degraded.sample_rate) {
    return absl::InvalidArgumentError(
        "silent-frame removal needs equal lengths and rates");
  }
  const int len = cfg.frame_len;
  const int hop = len / 2;
  const size_t n_frames = FrameCount(clean.size(), len, hop);
  if (n_frames == 0) {
    return absl::FailedPreconditionError(
        "signal shorter than one analysis frame");
  }
  const std::vector<double> window = StoiWindow(len);
  std::vector<double> energy_db(n_frames);
  double loudest_norm = 0.0;
  for (size_t f = 0; f < n_frames; ++f) {
    double s = 0.0;
    for (int i = 0; i < len; ++i) {
      const double v = window[i] * clean.samples[f * hop + i];
      s += v * v;
    }
    loudest_norm = std::max(loudest_norm, std::sqrt(s));
    energy_db[f] = 20.0 * std::log10(std::sqrt(s) + kEps);
  }
  if (loudest_norm < kMeasurementFloorRms) {
    return absl::FailedPreconditionError("clean signal is silent");
  }
  const double loudest_db =
      *std::max_element(energy_db.begin(), energy_db.end());
  std::vector<size_t> kept;
  for (size_t f = 0; f < n_frames; ++f) {
    if (loudest_db - cfg.silence_range_db - energy_db[f] < 0.0) {
      kept.push_back(f);
    }
  }
  const size_t out_len = (kept.size() - 1) * hop + len;
  AudioSignal x{std::vector<double>(out_len, 0.0), clean.sample_rate};
  AudioSignal y{std::vector<double>(out_len, 0.0), clean.sample_rate};
  for (size_t j = 0; j < kept.size(); ++j) {
    const size_t src = kept[j] * hop;
    const size_t dst = j * hop;
    for (int i = 0; i < len; ++i) {
      x.samples[dst + i] += window[i] * clean.samples[src + i];
      y.samples[dst + i] += window[i] * degraded.samples[src + i];
    }
  }
  return std::make_pair(std::move(x), std::move(y));
}

absl::StatusOr<double> Stoi(const AudioSignal& clean,
                            const AudioSignal& degraded,
                            const StoiConfig& cfg) {
  if (auto s = ValidateStoiConfig(cfg); !s.ok()) return s;
  if (auto s = ValidateSignal(clean); !s.ok()) return s;
  if (auto s = ValidateSignal(degraded); !s.ok()) return s;
  if (clean.sample_rate != degraded.sample_rate) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "STOI inputs differ in rate (%d vs %d Hz)", clean.sample_rate,
        degraded.sample_rate));
  }
  auto bands = ThirdOctaveBank(cfg);
  if (!bands.ok()) return bands.status();

  auto x = Resample(clean, cfg.work_rate);
  if (!x.ok()) return x.status();
  auto y = Resample(degraded, cfg.work_rate);
  if (!y.ok()) return y.status();
  const size_t longer = std::max(x->size(), y->size());
  const size_t shorter = std::min(x->size(), y->size());
  if (longer - shorter > 0.05 * longer) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "STOI inputs differ in length by more than 5%% (%d vs %d samples)",
        x->size(), y->size()));
  }
  x->samples.resize(shorter);
  y->samples.resize(shorter);

  auto trimmed = RemoveSilentFrames(*x, *y, cfg);
  if (!trimmed.ok()) return trimmed.status();

  const auto x_env = BandEnvelopes(trimmed->first.samples, cfg, *bands);
  const auto y_env = BandEnvelopes(trimmed->second.samples, cfg, *bands);
  const int n = cfg.seg_frames;
  const int n_frames = static_cast<int>(x_env.front().size());
  if (n_frames < n) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "only %d frames after silence removal, need %d", n_frames, n));
  }
  const double clip = 1.0 + std::pow(10.0, -cfg.clip_db / 20.0);
  std::vector<double> xs(n), ys(n);
  double total = 0.0;
  for (int m = n; m <= n_frames; ++m) {
    for (int b = 0; b < bands->n_bands(); ++b) {
      const double* xb = x_env[b].data() + (m - n);
      const double* yb = y_env[b].data() + (m - n);
      const double alpha = Norm(xb, n) / (Norm(yb, n) + kEps);
      double x_mean = 0.0, y_mean = 0.0;
      for (int i = 0; i < n; ++i) {
        xs[i] = xb[i];
        ys[i] = std::min(alpha * yb[i], clip * xb[i]);
        x_mean += xs[i];
        y_mean += ys[i];
      }
      x_mean /= n;
      y_mean /= n;
      for (int i = 0; i < n; ++i) {
        xs[i] -= x_mean;
        ys[i] -= y_mean;
      }
      const double x_norm = Norm(xs.data(), n) + kEps;
      const double y_norm = Norm(ys.data(), n) + kEps;
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += (xs[i] / x_norm) * (ys[i] / y_norm);
      total += dot;
    }
  }
  const int n_segments = n_frames - n + 1;
  return total / (static_cast<double>(n_segments) * bands->n_bands());
}

}  // namespace lombard
