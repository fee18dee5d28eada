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


// Serial reference against the OpenMP trial scorer.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "benchmark/benchmark.h"
#include "lombard/audio.h"
#include "lombard/kernels.h"
#include "lombard/random.h"

namespace lombard {
namespace {

constexpr int kRate = 16000;

// Harmonic complex with a 4 Hz syllable envelope.
AudioSignal Voiced(double f0, double level, uint64_t seed) {
  SeededRandom rng(seed);
  AudioSignal x{std::vector<double>(2 * kRate), kRate};
  const double phase = 2.0 * std::numbers::pi * rng.Uniform();
  for (size_t i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / kRate;
    double v = 0.0;
    for (int h = 1; h * f0 < 4000.0; ++h) {
      v += std::sin(2.0 * std::numbers::pi * h * f0 * t) / h;
    }
    const double env =
        std::max(0.0, std::sin(2.0 * std::numbers::pi * 4.0 * t + phase));
    x.samples[i] = level * (env * v + 0.01 * rng.Gaussian());
  }
  return x;
}

struct Fixture {
  std::vector<AudioSignal> base, high;
  AudioSignal noise;
  std::vector<Trial> trials;
  TrialSettings settings;

  explicit Fixture(int n) {
    base.reserve(n);
    high.reserve(n);
    for (int i = 0; i < n; ++i) {
      base.push_back(Voiced(110.0 + 5.0 * i, 0.02, 2 * i + 1));
      high.push_back(Voiced(115.0 + 5.0 * i, 0.05, 2 * i + 2));
    }
    SeededRandom rng(99);
    noise = AudioSignal{std::vector<double>(2 * kRate + kRate / 10), kRate};
    for (double& v : noise.samples) v = 0.05 * rng.Gaussian();
    for (int i = 0; i < n; ++i) {
      trials.push_back({&base[i], &high[i], nullptr, nullptr, &noise, ""});
    }
    settings.noise_level_dba = 65.0;
  }
};

const Fixture& SharedFixture() {
  static const Fixture* fixture = new Fixture(32);
  return *fixture;
}

void BM_ScoreTrialsSerial(benchmark::State& state) {
  const Fixture& f = SharedFixture();
  for (auto _ : state) {
    auto scores = ScoreTrialsSerial(f.trials, f.settings);
    if (!scores.ok()) state.SkipWithError(scores.status().ToString().c_str());
    benchmark::DoNotOptimize(scores);
  }
  state.SetItemsProcessed(state.iterations() * f.trials.size());
}
BENCHMARK(BM_ScoreTrialsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ScoreTrialsParallel(benchmark::State& state) {
  const Fixture& f = SharedFixture();
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto scores = ScoreTrialsParallel(f.trials, f.settings, jobs);
    if (!scores.ok()) state.SkipWithError(scores.status().ToString().c_str());
    benchmark::DoNotOptimize(scores);
  }
  state.SetItemsProcessed(state.iterations() * f.trials.size());
}
BENCHMARK(BM_ScoreTrialsParallel)
    ->Arg(1)
    ->Arg(2)
    ->Arg(4)
    ->Arg(0)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace
}  // namespace lombard

BENCHMARK_MAIN();
