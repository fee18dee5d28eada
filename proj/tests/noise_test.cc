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

#include <cmath>
#include <filesystem>

#include "gtest/gtest.h"
#include "support/synthetic_speech.h"

namespace lombard {
namespace {

using ::lombard::testing::Sine;
using ::lombard::testing::SyntheticSentence;
using ::lombard::testing::VoiceForSpeaker;
using ::lombard::testing::WhiteNoise;

// Level of envelope `env` at the band nearest to `hz`.
double LevelAt(const SpectrumEnvelope& env, double hz) {
  size_t best = 0;
  for (size_t i = 0; i < env.band_centers_hz.size(); ++i) {
    if (std::fabs(std::log(env.band_centers_hz[i] / hz)) <
        std::fabs(std::log(env.band_centers_hz[best] / hz))) {
      best = i;
    }
  }
  return env.band_levels_db[best];
}

TEST(ThirdOctaveCentersTest, Range) {
  const auto c = ThirdOctaveCenters();
  ASSERT_EQ(c.size(), 19u);
  EXPECT_NEAR(c.front(), 125.0, 1.0);
  EXPECT_NEAR(c.back(), 8000.0, 1.0);
  EXPECT_DOUBLE_EQ(c[9], 1000.0);
}

TEST(ValidateEnvelopeTest, Checks) {
  EXPECT_TRUE(ValidateEnvelope(DefaultSpeechEnvelope()).ok());
  SpectrumEnvelope few{{100, 200, 300}, {0, 0, 0}};
  EXPECT_FALSE(ValidateEnvelope(few).ok());
  SpectrumEnvelope unsorted = DefaultSpeechEnvelope();
  std::swap(unsorted.band_centers_hz[2], unsorted.band_centers_hz[3]);
  EXPECT_FALSE(ValidateEnvelope(unsorted).ok());
  SpectrumEnvelope bad = DefaultSpeechEnvelope();
  bad.band_levels_db[4] = std::nan("");
  EXPECT_FALSE(ValidateEnvelope(bad).ok());
}

TEST(ValidateNoiseSpecTest, Ranges) {
  NoiseSpec spec;
  EXPECT_TRUE(ValidateNoiseSpec(spec).ok());
  spec.level_dba = 121;
  EXPECT_FALSE(ValidateNoiseSpec(spec).ok());
  spec.level_dba = -1;
  EXPECT_FALSE(ValidateNoiseSpec(spec).ok());
  spec.level_dba = 60;
  spec.duration_seconds = 0;
  EXPECT_FALSE(ValidateNoiseSpec(spec).ok());
}

TEST(EstimateLtassTest, WhiteNoiseRisesOneDbPerBand) {
  const std::vector<AudioSignal> corpus = {WhiteNoise(1, 22050, 20.0)};
  auto env = EstimateLtass(corpus);
  ASSERT_TRUE(env.ok());
  ASSERT_EQ(env->band_levels_db.size(), 19u);
  EXPECT_DOUBLE_EQ(env->band_levels_db.back(), 0.0);
  // Band power grows with bandwidth: 10*log10(2^(1/3)) per band.
  const double step = 10.0 * std::log10(std::cbrt(2.0));
  for (size_t i = 1; i < env->band_levels_db.size(); ++i) {
    EXPECT_NEAR(env->band_levels_db[i] - env->band_levels_db[i - 1], step, 0.5)
        << env->band_centers_hz[i];
  }
}

TEST(EstimateLtassTest, SineIsALine) {
  const std::vector<AudioSignal> corpus = {Sine(1000.0, 0.5, 16000, 12.0)};
  auto env = EstimateLtass(corpus);
  ASSERT_TRUE(env.ok());
  EXPECT_DOUBLE_EQ(LevelAt(*env, 1000.0), 0.0);
  for (size_t i = 0; i < env->band_centers_hz.size(); ++i) {
    const double f = env->band_centers_hz[i];
    if (f <= 250.0 || f >= 4000.0) {
      EXPECT_LE(env->band_levels_db[i], -40.0) << f;
    }
  }
}

TEST(EstimateLtassTest, Errors) {
  EXPECT_FALSE(EstimateLtass(std::vector<AudioSignal>{}).ok());
  const std::vector<AudioSignal> silent = {
      {std::vector<double>(16000, 0.0), 16000}};
  EXPECT_FALSE(EstimateLtass(silent).ok());
  const std::vector<AudioSignal> mixed = {WhiteNoise(1, 16000, 1.0),
                                          WhiteNoise(2, 8000, 1.0)};
  EXPECT_FALSE(EstimateLtass(mixed).ok());
}

TEST(EstimateLtassTest, ScaleInvariant) {
  std::vector<AudioSignal> corpus;
  for (int k = 0; k < 4; ++k) {
    corpus.push_back(SyntheticSentence(k, VoiceForSpeaker(k), 16000, 3.0));
  }
  auto a = EstimateLtass(corpus);
  for (auto& s : corpus) s = Scaled(s, 7.5);
  auto b = EstimateLtass(corpus);
  ASSERT_TRUE(a.ok() && b.ok());
  for (size_t i = 0; i < a->band_levels_db.size(); ++i) {
    EXPECT_NEAR(a->band_levels_db[i], b->band_levels_db[i], 1e-9);
  }
}

TEST(GenerateSsnTest, MatchesEnvelopeAndLevel) {
  const SpectrumEnvelope target = DefaultSpeechEnvelope();
  NoiseSpec spec{NoiseKind::kSsn, 65.0, 42, 30.0};
  auto ssn = GenerateSsn(target, spec, {}, 16000);
  ASSERT_TRUE(ssn.ok());
  EXPECT_EQ(ssn->size(), 480000u);
  EXPECT_NEAR(*AWeightedLevel(*ssn, {}), 65.0, 0.05);

  // Welch oracle on the output, compared after aligning the maxima.
  const std::vector<AudioSignal> one = {*ssn};
  auto measured = EstimateLtass(one);
  ASSERT_TRUE(measured.ok());
  double target_max = -1e9;
  for (double l : target.band_levels_db) target_max = std::max(target_max, l);
  for (size_t i = 0; i < measured->band_centers_hz.size(); ++i) {
    const double f = measured->band_centers_hz[i];
    if (f < 150.0 || f > 5000.0) continue;
    EXPECT_NEAR(measured->band_levels_db[i], LevelAt(target, f) - target_max,
                2.0)
        << f << " Hz";
  }
}

TEST(GenerateSsnTest, Stationary) {
  NoiseSpec spec{NoiseKind::kSsn, 60.0, 1, 10.0};
  auto ssn = GenerateSsn(DefaultSpeechEnvelope(), spec, {}, 16000);
  ASSERT_TRUE(ssn.ok());
  const double whole = Rms(*ssn);
  for (size_t start = 0; start + 16000 <= ssn->size(); start += 16000) {
    const std::span<const double> w(ssn->samples.data() + start, 16000);
    EXPECT_NEAR(20.0 * std::log10(Rms(w) / whole), 0.0, 1.5);
  }
}

TEST(GenerateSsnTest, SeedDeterminism) {
  NoiseSpec spec{NoiseKind::kSsn, 60.0, 9, 2.0};
  auto a = GenerateSsn(DefaultSpeechEnvelope(), spec, {}, 16000);
  auto b = GenerateSsn(DefaultSpeechEnvelope(), spec, {}, 16000);
  spec.seed = 10;
  auto c = GenerateSsn(DefaultSpeechEnvelope(), spec, {}, 16000);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->samples, b->samples);
  EXPECT_NE(a->samples, c->samples);
}

TEST(GenerateSsnTest, RejectsBadEnvelope) {
  SpectrumEnvelope bad{{100, 200}, {0, 0}};
  EXPECT_FALSE(GenerateSsn(bad, {}, {}, 16000).ok());
}

TEST(AssembleBabbleTest, TwoIdenticalUnshiftedStreams) {
  const AudioSignal s = SyntheticSentence(1, VoiceForSpeaker(0), 16000, 1.0);
  const std::vector<AudioSignal> streams = {s, s};
  NoiseSpec spec{NoiseKind::kBabble, 60.0, 3, 1.0};
  auto babble = AssembleBabble(streams, spec, {}, {2, false});
  ASSERT_TRUE(babble.ok());
  EXPECT_NEAR(*AWeightedLevel(*babble, {}), 60.0, 0.05);
  // Output is a pure scaling of the stream.
  const double g = babble->samples[8000] / s.samples[8000];
  for (size_t i = 0; i < s.size(); i += 37) {
    ASSERT_NEAR(babble->samples[i], g * s.samples[i], 1e-9);
  }
}

TEST(AssembleBabbleTest, DeterministicAndGaussianLike) {
  std::vector<AudioSignal> streams;
  for (int k = 0; k < 10; ++k) {
    streams.push_back(
        SyntheticSentence(100 + k, VoiceForSpeaker(k), 16000, 3.0));
  }
  NoiseSpec spec{NoiseKind::kBabble, 65.0, 5, 3.0};
  auto a = AssembleBabble(streams, spec, {});
  auto b = AssembleBabble(streams, spec, {});
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->samples, b->samples);
  EXPECT_NEAR(*AWeightedLevel(*a, {}), 65.0, 0.05);

  double m2 = 0.0, m4 = 0.0, mean = 0.0;
  for (double v : a->samples) mean += v;
  mean /= a->size();
  for (double v : a->samples) {
    m2 += (v - mean) * (v - mean);
    m4 += std::pow(v - mean, 4);
  }
  m2 /= a->size();
  m4 /= a->size();
  EXPECT_LT(std::fabs(m4 / (m2 * m2) - 3.0), 1.0);
}

TEST(AssembleBabbleTest, Errors) {
  NoiseSpec spec{NoiseKind::kBabble, 65.0, 5, 1.0};
  EXPECT_FALSE(AssembleBabble(std::vector<AudioSignal>{}, spec, {}).ok());
  const std::vector<AudioSignal> one = {WhiteNoise(1, 16000, 1.0)};
  EXPECT_FALSE(AssembleBabble(one, spec, {}, {1, true}).ok());
}

TEST(MixAtLevelsTest, EqualLevels) {
  const AudioSignal speech = testing::WhiteNoise(1, 16000, 1.0);
  const AudioSignal noise = testing::WhiteNoise(2, 16000, 2.0);
  auto mix = MixAtLevels(speech, noise, 60.0, 60.0, {});
  ASSERT_TRUE(mix.ok());
  EXPECT_EQ(mix->mixture.size(), speech.size());
  EXPECT_NEAR(*AWeightedLevel(mix->speech, {}), *AWeightedLevel(mix->noise, {}),
              0.1);
}

TEST(MixAtLevelsTest, MinusTwentyDbOnFlatSignals) {
  const AudioSignal speech = testing::WhiteNoise(3, 16000, 1.0);
  const AudioSignal noise = testing::WhiteNoise(4, 16000, 1.0);
  auto mix = MixAtLevels(speech, noise, 60.0, 80.0, {});
  ASSERT_TRUE(mix.ok());
  EXPECT_NEAR(Rms(mix->noise) / Rms(mix->speech), 10.0, 0.2);
}

TEST(MixAtLevelsTest, ComponentsRecoverable) {
  const AudioSignal speech = SyntheticSentence(2, VoiceForSpeaker(1), 16000);
  NoiseSpec spec{NoiseKind::kSsn, 70.0, 8, 3.0};
  auto noise = GenerateSsn(DefaultSpeechEnvelope(), spec, {}, 16000);
  ASSERT_TRUE(noise.ok());
  auto mix = MixAtLevels(speech, *noise, 65.0, 70.0, {});
  ASSERT_TRUE(mix.ok());
  for (size_t i = 0; i < speech.size(); ++i) {
    ASSERT_NEAR(mix->mixture.samples[i] - mix->speech.samples[i],
                mix->noise.samples[i], 1e-9);
  }
  // Noise is trimmed from sample 0.
  const double g = mix->noise.samples[100] / noise->samples[100];
  EXPECT_NEAR(mix->noise.samples[5000], g * noise->samples[5000], 1e-12);
}

TEST(MixAtLevelsTest, Errors) {
  const AudioSignal a = WhiteNoise(1, 16000, 1.0);
  EXPECT_FALSE(MixAtLevels(a, WhiteNoise(2, 8000, 2.0), 60, 60, {}).ok());
  EXPECT_FALSE(MixAtLevels(a, WhiteNoise(2, 16000, 0.5), 60, 60, {}).ok());
}

TEST(EnvelopeCsvTest, RoundTrip) {
  const SpectrumEnvelope env = DefaultSpeechEnvelope();
  const std::string csv = EnvelopeToCsv(env);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "center_hz,level_db");
  auto back = EnvelopeFromCsv(csv);
  ASSERT_TRUE(back.ok());
  ASSERT_EQ(back->band_levels_db.size(), env.band_levels_db.size());
  for (size_t i = 0; i < env.band_levels_db.size(); ++i) {
    EXPECT_DOUBLE_EQ(back->band_centers_hz[i], env.band_centers_hz[i]);
    EXPECT_DOUBLE_EQ(back->band_levels_db[i], env.band_levels_db[i]);
  }
  EXPECT_FALSE(EnvelopeFromCsv("center_hz,level_db\n100,x\n").ok());
}

TEST(ParseNoiseKindTest, Names) {
  EXPECT_EQ(*ParseNoiseKind("SSN"), NoiseKind::kSsn);
  EXPECT_EQ(*ParseNoiseKind("babble"), NoiseKind::kBabble);
  EXPECT_EQ(*ParseNoiseKind("external"), NoiseKind::kExternal);
  EXPECT_FALSE(ParseNoiseKind("pink").ok());
}

}  // namespace
}  // namespace lombard
