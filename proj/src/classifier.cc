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

#include "lombard/classifier.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_format.h"
#include "lombard/kernels.h"
#include "lombard/log.h"
#include "lombard/mapping.h"
#include "lombard/random.h"
#include "lombard/resample.h"
#include "lombard/self_feedback.h"
#include "lombard/status_macros.h"
#include "lombard/wav.h"

namespace lombard {
namespace {

absl::Status Annotate(const absl::Status& status, const std::string& context) {
  if (status.ok()) return status;
  return absl::Status(status.code(),
                      context + ": " + std::string(status.message()));
}

std::string Cell(const std::string& speaker, const std::string& sentence,
                 double level) {
  return absl::StrFormat("speaker %s sentence %s at %g dBA", speaker, sentence,
                         level);
}

bool InLadder(const std::vector<double>& ladder, double level) {
  return std::any_of(ladder.begin(), ladder.end(), [&](double l) {
    return LevelKey(l) == LevelKey(level);
  });
}

absl::StatusOr<AudioSignal> AtRate(AudioSignal signal, int rate) {
  if (signal.sample_rate == rate) return signal;
  return Resample(signal, rate);
}

}  // namespace

bool IsSignificantIncrease(const TTestResult& test, double alpha) {
  return test.p_two_tailed < alpha && test.direction == Direction::kIncrease;
}

absl::StatusOr<LadderResult> WalkLadder(const std::vector<double>& ladder,
                                        const PairEvaluator& evaluate) {
  if (ladder.size() < 2) {
    return absl::InvalidArgumentError("ladder needs at least two levels");
  }
  if (!std::is_sorted(ladder.begin(), ladder.end(), std::less_equal<>())) {
    return absl::InvalidArgumentError("ladder must be strictly ascending");
  }
  LadderResult result;
  double base = ladder.front();
  for (size_t i = 1; i < ladder.size(); ++i) {
    const double high = ladder[i];
    ASSIGN_OR_RETURN(ComparisonRecord record, evaluate(base, high));
    const bool significant = record.significant;
    result.comparisons.push_back(std::move(record));
    if (significant) {
      result.transition_points.push_back(high);
      base = high;
    }
  }
  result.n_flavors = static_cast<int>(result.transition_points.size()) + 1;
  return result;
}

CorpusEvaluator::CorpusEvaluator(NoiseKind noise_type, PipelineConfig config,
                                 int jobs)
    : noise_type_(noise_type), config_(std::move(config)), jobs_(jobs) {}

absl::StatusOr<std::unique_ptr<CorpusEvaluator>> CorpusEvaluator::Create(
    const CorpusManifest& manifest, NoiseKind noise_type,
    const PipelineConfig& config, int jobs) {
  RETURN_IF_ERROR(ValidateConfig(config));
  if (noise_type == NoiseKind::kExternal) {
    return absl::InvalidArgumentError(
        "corpus noise condition must be ssn or babble");
  }
  CorpusManifest subset;
  subset.ladder = config.ladder;
  for (const auto& e : manifest.entries) {
    if (e.noise_type == noise_type && InLadder(config.ladder, e.level_dba)) {
      subset.entries.push_back(e);
    }
  }
  ValidationOptions options;
  options.check_files = false;
  options.probe_audio = false;
  options.require_ladder_for = noise_type;
  const ValidationReport report = ValidateManifest(subset, options);
  if (!report.ok()) {
    return absl::FailedPreconditionError(report.ToString());
  }

  std::unique_ptr<CorpusEvaluator> ev(
      new CorpusEvaluator(noise_type, config, jobs));
  std::set<std::string> speakers, sentences;
  for (const auto& e : subset.entries) {
    speakers.insert(e.speaker_id);
    sentences.insert(e.sentence_id);
  }
  ev->speakers_.assign(speakers.begin(), speakers.end());
  ev->sentences_.assign(sentences.begin(), sentences.end());
  const size_t n_sentences = ev->sentences_.size();
  for (const auto& e : subset.entries) {
    auto& grid = ev->paths_[LevelKey(e.level_dba)];
    if (grid.empty()) {
      grid.assign(ev->speakers_.size(),
                  std::vector<std::filesystem::path>(n_sentences));
    }
    const size_t s = std::lower_bound(ev->speakers_.begin(),
                                      ev->speakers_.end(), e.speaker_id) -
                     ev->speakers_.begin();
    const size_t k = std::lower_bound(ev->sentences_.begin(),
                                      ev->sentences_.end(), e.sentence_id) -
                     ev->sentences_.begin();
    grid[s][k] = e.path;
  }
  std::vector<const ManifestEntry*> order;
  for (const auto& e : subset.entries) order.push_back(&e);
  std::vector<WavInfo> infos(order.size());
  RETURN_IF_ERROR(ParallelFor(order.size(), jobs, [&](size_t i) {
    const ManifestEntry& e = *order[i];
    auto info = ProbeWav(e.path);
    if (!info.ok()) {
      return Annotate(info.status(),
                      Cell(e.speaker_id, e.sentence_id, e.level_dba));
    }
    infos[i] = *info;
    return absl::OkStatus();
  }));
  for (size_t i = 0; i < infos.size(); ++i) {
    const ManifestEntry& e = *order[i];
    if (ev->sample_rate_ == 0) ev->sample_rate_ = infos[i].sample_rate;
    if (infos[i].sample_rate != ev->sample_rate_) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s: sample rate %d Hz differs from corpus rate %d Hz",
          Cell(e.speaker_id, e.sentence_id, e.level_dba),
          infos[i].sample_rate, ev->sample_rate_));
    }
    ev->longest_ = std::max(ev->longest_, infos[i].frames);
  }
  return ev;
}

absl::StatusOr<const CorpusEvaluator::Level*> CorpusEvaluator::GetLevel(
    double level) {
  const int64_t key = LevelKey(level);
  if (auto it = cache_.find(key); it != cache_.end()) return &it->second;
  auto grid_it = paths_.find(key);
  if (grid_it == paths_.end()) {
    return absl::NotFoundError(
        absl::StrFormat("no %s recordings at %g dBA",
                        std::string(NoiseKindName(noise_type_)),
                        level));
  }
  const auto& grid = grid_it->second;
  const size_t n_speakers = speakers_.size();
  const size_t n_sentences = sentences_.size();
  Level loaded;
  loaded.recordings.assign(n_speakers, std::vector<AudioSignal>(n_sentences));
  loaded.feedback.assign(n_speakers, std::vector<AudioSignal>(n_sentences));
  RETURN_IF_ERROR(ParallelFor(n_speakers * n_sentences, jobs_, [&](size_t i) {
    const size_t s = i / n_sentences, k = i % n_sentences;
    const std::string cell = Cell(speakers_[s], sentences_[k], level);
    auto audio = ReadWav(grid[s][k]);
    if (!audio.ok()) return Annotate(audio.status(), cell);
    auto fb = ApplySelfFeedback(*audio, config_.feedback);
    if (!fb.ok()) return Annotate(fb.status(), cell);
    loaded.feedback[s][k] = *std::move(fb);
    loaded.recordings[s][k] = *std::move(audio);
    return absl::OkStatus();
  }));
  for (size_t s = 0; s < n_speakers; ++s) {
    for (size_t k = 0; k < n_sentences; ++k) {
      const int rate = loaded.recordings[s][k].sample_rate;
      if (rate != sample_rate_) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "%s: sample rate %d Hz differs from corpus rate %d Hz",
            Cell(speakers_[s], sentences_[k], level), rate, sample_rate_));
      }
      if (config_.reference != StoiReference::kRecording) {
        loaded.recordings[s][k] = AudioSignal{};
      }
    }
  }
  return &cache_.emplace(key, std::move(loaded)).first->second;
}

absl::Status CorpusEvaluator::PrepareNoiseSources() {
  if (noise_ready_) return absl::OkStatus();
  const auto& noise = config_.noise;
  if (noise.external_wav.has_value()) {
    ASSIGN_OR_RETURN(AudioSignal ext, ReadWav(*noise.external_wav));
    ASSIGN_OR_RETURN(external_noise_, AtRate(std::move(ext), sample_rate_));
    noise_ready_ = true;
    return absl::OkStatus();
  }
  std::vector<AudioSignal> lowest;
  const bool need_corpus =
      (noise_type_ == NoiseKind::kSsn && noise.ssn_envelope == "corpus") ||
      (noise_type_ == NoiseKind::kBabble && noise.babble_sources.empty());
  if (need_corpus) {
    ASSIGN_OR_RETURN(const Level* level, GetLevel(config_.ladder.front()));
    for (const auto& row : level->feedback) {
      lowest.insert(lowest.end(), row.begin(), row.end());
    }
  }
  if (noise_type_ == NoiseKind::kSsn) {
    if (noise.ssn_envelope == "corpus") {
      ASSIGN_OR_RETURN(ssn_envelope_, EstimateLtass(lowest));
    } else if (noise.ssn_envelope == "default") {
      ssn_envelope_ = DefaultSpeechEnvelope();
    } else {
      ASSIGN_OR_RETURN(ssn_envelope_, LoadEnvelopeCsv(noise.ssn_envelope));
    }
  } else if (noise.babble_sources.empty()) {
    babble_streams_ = std::move(lowest);
  } else {
    for (const auto& path : noise.babble_sources) {
      auto audio = ReadWav(path);
      if (!audio.ok()) return Annotate(audio.status(), path.string());
      ASSIGN_OR_RETURN(AudioSignal resampled,
                       AtRate(*std::move(audio), sample_rate_));
      babble_streams_.push_back(std::move(resampled));
    }
  }
  noise_ready_ = true;
  return absl::OkStatus();
}

absl::StatusOr<std::vector<AudioSignal>> CorpusEvaluator::NoiseForPair(
    double high_level, uint64_t seed, size_t length) {
  RETURN_IF_ERROR(PrepareNoiseSources());
  const auto key = static_cast<uint64_t>(LevelKey(high_level));
  std::vector<AudioSignal> out;
  if (config_.noise.external_wav.has_value()) {
    if (external_noise_.size() < length) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "external noise has %d samples, needs %d", external_noise_.size(),
          length));
    }
    out.push_back(external_noise_);
    return out;
  }
  NoiseSpec spec;
  spec.kind = noise_type_;
  spec.level_dba = high_level;
  spec.duration_seconds = static_cast<double>(length) / sample_rate_;
  if (noise_type_ == NoiseKind::kSsn) {
    spec.seed = MixSeed(seed, key);
    ASSIGN_OR_RETURN(AudioSignal ssn,
                     GenerateSsn(ssn_envelope_, spec, config_.calibration,
                                 sample_rate_));
    out.push_back(std::move(ssn));
    return out;
  }
  BabbleOptions options;
  options.n_talkers = config_.noise.babble_talkers;
  out.resize(sentences_.size());
  RETURN_IF_ERROR(ParallelFor(sentences_.size(), jobs_, [&](size_t k) {
    NoiseSpec per = spec;
    per.seed = MixSeed(MixSeed(seed, key), k);
    auto babble =
        AssembleBabble(babble_streams_, per, config_.calibration, options);
    if (!babble.ok()) return babble.status();
    out[k] = *std::move(babble);
    return absl::OkStatus();
  }));
  return out;
}

absl::StatusOr<ComparisonRecord> CorpusEvaluator::EvaluatePair(
    double base_level, double high_level, uint64_t seed) {
  if (!InLadder(config_.ladder, base_level) ||
      !InLadder(config_.ladder, high_level)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "levels %g/%g must both be on the ladder", base_level, high_level));
  }
  if (!(base_level < high_level)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "base level %g must be below high level %g", base_level, high_level));
  }
  ASSIGN_OR_RETURN(const Level* base, GetLevel(base_level));
  ASSIGN_OR_RETURN(const Level* high, GetLevel(high_level));

  // Noise covers the longest corpus utterance plus 0.1 s.
  const size_t length = longest_ + static_cast<size_t>(sample_rate_ / 10);
  ASSIGN_OR_RETURN(const std::vector<AudioSignal> noises,
                   NoiseForPair(high_level, seed, length));

  const size_t n_speakers = speakers_.size();
  const size_t n_sentences = sentences_.size();
  std::vector<Trial> trials(n_speakers * n_sentences);
  for (size_t s = 0; s < n_speakers; ++s) {
    for (size_t k = 0; k < n_sentences; ++k) {
      Trial& t = trials[s * n_sentences + k];
      t.base_feedback = &base->feedback[s][k];
      t.high_feedback = &high->feedback[s][k];
      t.base_recording = &base->recordings[s][k];
      t.high_recording = &high->recordings[s][k];
      t.noise = &noises[noises.size() == 1 ? 0 : k];
      t.label = absl::StrFormat("speaker %s sentence %s at %g/%g dBA",
                                speakers_[s], sentences_[k], base_level,
                                high_level);
    }
  }
  TrialSettings settings;
  settings.calibration = config_.calibration;
  settings.stoi = config_.stoi;
  settings.presentation = config_.presentation;
  settings.reference = config_.reference;
  settings.noise_level_dba = high_level;
  ASSIGN_OR_RETURN(const std::vector<TrialScore> scores,
                   ScoreTrialsParallel(trials, settings, jobs_));

  ComparisonRecord record;
  record.base_level = base_level;
  record.high_level = high_level;
  record.sentence_ids = sentences_;
  std::vector<double> wb(n_speakers), wh(n_speakers), db(n_speakers),
      dh(n_speakers);
  for (size_t k = 0; k < n_sentences; ++k) {
    for (size_t s = 0; s < n_speakers; ++s) {
      const TrialScore& sc = scores[s * n_sentences + k];
      db[s] = sc.stoi_base;
      dh[s] = sc.stoi_high;
      wb[s] = MapStoiToWcr(sc.stoi_base, config_.mapping);
      wh[s] = MapStoiToWcr(sc.stoi_high, config_.mapping);
    }
    record.wcr_base.push_back(CompensatedMean(wb));
    record.wcr_high.push_back(CompensatedMean(wh));
    record.stoi_base.push_back(CompensatedMean(db));
    record.stoi_high.push_back(CompensatedMean(dh));
  }
  ASSIGN_OR_RETURN(record.test,
                   PairedTest(config_.test, record.wcr_base, record.wcr_high));
  record.significant = IsSignificantIncrease(record.test, config_.alpha);

  if (config_.per_speaker_tests) {
    std::vector<double> xb(n_sentences), xh(n_sentences);
    for (size_t s = 0; s < n_speakers; ++s) {
      for (size_t k = 0; k < n_sentences; ++k) {
        const TrialScore& sc = scores[s * n_sentences + k];
        xb[k] = MapStoiToWcr(sc.stoi_base, config_.mapping);
        xh[k] = MapStoiToWcr(sc.stoi_high, config_.mapping);
      }
      SpeakerTest st;
      st.speaker_id = speakers_[s];
      ASSIGN_OR_RETURN(st.test, PairedTest(config_.test, xb, xh));
      record.per_speaker.push_back(std::move(st));
    }
  }
  LogInfo(absl::StrFormat("%g/%g: mean WCR %.2f vs %.2f, p=%.3g", base_level,
                          high_level, CompensatedMean(record.wcr_base),
                          CompensatedMean(record.wcr_high),
                          record.test.p_two_tailed));
  return record;
}

void CorpusEvaluator::Release(const std::vector<double>& keep) {
  for (auto it = cache_.begin(); it != cache_.end();) {
    const bool kept = std::any_of(keep.begin(), keep.end(), [&](double l) {
      return LevelKey(l) == it->first;
    });
    it = kept ? std::next(it) : cache_.erase(it);
  }
}

absl::StatusOr<ComparisonRecord> EvaluatePair(const CorpusManifest& manifest,
                                              NoiseKind noise_type,
                                              double base_level,
                                              double high_level,
                                              const PipelineConfig& config,
                                              uint64_t seed, int jobs) {
  ASSIGN_OR_RETURN(auto evaluator,
                   CorpusEvaluator::Create(manifest, noise_type, config, jobs));
  return evaluator->EvaluatePair(base_level, high_level, seed);
}

absl::StatusOr<LadderResult> ClassifyLadder(const CorpusManifest& manifest,
                                            NoiseKind noise_type,
                                            const PipelineConfig& config,
                                            uint64_t seed, int jobs) {
  ASSIGN_OR_RETURN(auto evaluator,
                   CorpusEvaluator::Create(manifest, noise_type, config, jobs));
  ASSIGN_OR_RETURN(
      LadderResult result,
      WalkLadder(config.ladder,
                 [&](double base, double high)
                     -> absl::StatusOr<ComparisonRecord> {
                   auto record = evaluator->EvaluatePair(base, high, seed);
                   evaluator->Release({base, high});
                   return record;
                 }));
  result.noise_type = noise_type;
  result.seed = seed;
  result.alpha = config.alpha;
  return result;
}

}  // namespace lombard
