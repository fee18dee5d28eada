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

#include "lombard/resample.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "absl/strings/str_format.h"

namespace lombard {
namespace {

constexpr int64_t kMaxTabulatedPhases = 1024;

class SincKernel {
 public:
  SincKernel(double cutoff, const ResampleOptions& options)
      : cutoff_(cutoff),
        half_width_(options.zero_crossings / cutoff),
        beta_(options.kaiser_beta),
        norm_(1.0 / std::cyl_bessel_i(0.0, options.kaiser_beta)) {}

  // Taps span [-reach + 1, reach] around the integer part of the time.
  int64_t reach() const {
    return static_cast<int64_t>(std::ceil(half_width_));
  }

  double operator()(double tau) const {
    const double u = tau / half_width_;
    if (std::fabs(u) >= 1.0) return 0.0;
    const double window =
        std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - u * u)) * norm_;
    const double arg = std::numbers::pi * cutoff_ * tau;
    const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
    return cutoff_ * sinc * window;
  }

 private:
  double cutoff_;
  double half_width_;
  double beta_;
  double norm_;
};

// Unit-DC-gain taps for output time base + phase / up.
void FillTaps(const SincKernel& kernel, int64_t phase, int64_t up,
              std::vector<double>& taps) {
  const int64_t reach = kernel.reach();
  taps.resize(static_cast<size_t>(2 * reach));
  const double frac = static_cast<double>(phase) / static_cast<double>(up);
  double sum = 0.0;
  for (int64_t k = -reach + 1; k <= reach; ++k) {
    const double v = kernel(frac - static_cast<double>(k));
    taps[static_cast<size_t>(k + reach - 1)] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
}

}  // namespace

absl::StatusOr<AudioSignal> Resample(const AudioSignal& signal,
                                     int target_rate,
                                     const ResampleOptions& options) {
  if (auto s = ValidateSignal(signal); !s.ok()) return s;
  if (target_rate <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("target rate must be positive, got %d", target_rate));
  }
  if (options.passband <= 0.0 || options.passband > 1.0 ||
      options.zero_crossings < 1) {
    return absl::InvalidArgumentError("invalid resampler options");
  }
  if (target_rate == signal.sample_rate) return signal;

  const int64_t g = std::gcd<int64_t, int64_t>(signal.sample_rate, target_rate);
  const int64_t up = target_rate / g;
  const int64_t down = signal.sample_rate / g;
  const double cutoff =
      options.passband *
      std::min(1.0, static_cast<double>(up) / static_cast<double>(down));
  const SincKernel kernel(cutoff, options);
  const int64_t reach = kernel.reach();

  const auto n_in = static_cast<int64_t>(signal.size());
  const int64_t n_out = (n_in * up + down - 1) / down;

  std::vector<std::vector<double>> table;
  if (up <= kMaxTabulatedPhases) {
    table.resize(static_cast<size_t>(up));
    for (int64_t p = 0; p < up; ++p) FillTaps(kernel, p, up, table[p]);
  }

  AudioSignal out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<size_t>(n_out));
  std::vector<double> scratch;
  const double* x = signal.samples.data();
  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t pos = n * down;
    const int64_t base = pos / up;
    const int64_t phase = pos % up;
    const std::vector<double>* taps;
    if (!table.empty()) {
      taps = &table[static_cast<size_t>(phase)];
    } else {
      FillTaps(kernel, phase, up, scratch);
      taps = &scratch;
    }
    double acc = 0.0;
    const int64_t first = base - reach + 1;
    if (first >= 0 && base + reach < n_in) {
      for (size_t k = 0; k < taps->size(); ++k) {
        acc += (*taps)[k] * x[first + k];
      }
    } else {
      for (size_t k = 0; k < taps->size(); ++k) {
        const int64_t j =
            std::clamp<int64_t>(first + static_cast<int64_t>(k), 0, n_in - 1);
        acc += (*taps)[k] * x[j];
      }
    }
    out.samples[static_cast<size_t>(n)] = acc;
  }
  return out;
}

}  // namespace lombard
