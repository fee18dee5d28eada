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

#ifndef LOMBARD_CLASSIFIER_H_
#define LOMBARD_CLASSIFIER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "lombard/audio.h"
#include "lombard/config.h"
#include "lombard/manifest.h"
#include "lombard/noise.h"
#include "lombard/stats.h"
#include "lombard/wav.h"

namespace lombard {

struct SpeakerTest {
  std::string speaker_id;
  TTestResult test;

  bool operator==(const SpeakerTest&) const = default;
};

// One level pair. Lists hold one value per sentence (mean over speakers),
// in sentence_id order.
struct ComparisonRecord {
  double base_level = 0.0;
  double high_level = 0.0;
  std::vector<std::string> sentence_ids;
  std::vector<double> wcr_base;
  std::vector<double> wcr_high;
  std::vector<double> stoi_base;
  std::vector<double> stoi_high;
  TTestResult test;
  // test.p_two_tailed < alpha and the direction is an increase.
  bool significant = false;
  // Filled only when per-speaker tests are enabled; not used for the verdict.
  std::vector<SpeakerTest> per_speaker;

  bool operator==(const ComparisonRecord&) const = default;
};

struct LadderResult {
  NoiseKind noise_type = NoiseKind::kSsn;
  uint64_t seed = 0;
  double alpha = 0.001;
  std::vector<ComparisonRecord> comparisons;
  std::vector<double> transition_points;
  int n_flavors = 1;

  bool operator==(const LadderResult&) const = default;
};

bool IsSignificantIncrease(const TTestResult& test, double alpha);

using PairEvaluator =
    std::function<absl::StatusOr<ComparisonRecord>(double base, double high)>;

// The iterative walk: base starts at ladder[0]; each higher level is
// compared with base, and a significant increase makes it a transition
// point and the new base. noise_type, seed and alpha are left at defaults.
absl::StatusOr<LadderResult> WalkLadder(const std::vector<double>& ladder,
                                        const PairEvaluator& evaluate);

// Loads one noise condition of a corpus and evaluates level pairs on it.
// Each ladder level is read and passed through the self-feedback model
// once; levels no longer reachable by the walk are released.
class CorpusEvaluator {
 public:
  // Checks that the manifest holds the full speaker x sentence matrix at
  // every ladder level of `noise_type`. File problems surface on load.
  static absl::StatusOr<std::unique_ptr<CorpusEvaluator>> Create(
      const CorpusManifest& manifest, NoiseKind noise_type,
      const PipelineConfig& config, int jobs = 0);

  absl::StatusOr<ComparisonRecord> EvaluatePair(double base_level,
                                                double high_level,
                                                uint64_t seed);

  // Drops cached levels other than `keep`.
  void Release(const std::vector<double>& keep);

  const std::vector<std::string>& speakers() const { return speakers_; }
  const std::vector<std::string>& sentences() const { return sentences_; }
  int sample_rate() const { return sample_rate_; }

 private:
  struct Level {
    // [speaker][sentence]
    std::vector<std::vector<AudioSignal>> recordings;
    std::vector<std::vector<AudioSignal>> feedback;
  };

  CorpusEvaluator(NoiseKind noise_type, PipelineConfig config, int jobs);

  absl::StatusOr<const Level*> GetLevel(double level);
  absl::Status PrepareNoiseSources();
  absl::StatusOr<std::vector<AudioSignal>> NoiseForPair(double high_level,
                                                        uint64_t seed,
                                                        size_t length);

  NoiseKind noise_type_;
  PipelineConfig config_;
  int jobs_;
  std::vector<std::string> speakers_;
  std::vector<std::string> sentences_;
  // (level key, speaker, sentence) -> path
  std::map<int64_t, std::vector<std::vector<std::filesystem::path>>> paths_;
  std::map<int64_t, Level> cache_;
  int sample_rate_ = 0;
  size_t longest_ = 0;
  bool noise_ready_ = false;
  SpectrumEnvelope ssn_envelope_;
  std::vector<AudioSignal> babble_streams_;
  AudioSignal external_noise_;
};

absl::StatusOr<ComparisonRecord> EvaluatePair(const CorpusManifest& manifest,
                                              NoiseKind noise_type,
                                              double base_level,
                                              double high_level,
                                              const PipelineConfig& config,
                                              uint64_t seed, int jobs = 0);

absl::StatusOr<LadderResult> ClassifyLadder(const CorpusManifest& manifest,
                                            NoiseKind noise_type,
                                            const PipelineConfig& config,
                                            uint64_t seed, int jobs = 0);

}  // namespace lombard

#endif  // LOMBARD_CLASSIFIER_H_
