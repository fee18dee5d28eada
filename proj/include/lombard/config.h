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

#ifndef LOMBARD_CONFIG_H_
#define LOMBARD_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "lombard/audio.h"
#include "lombard/mapping.h"
#include "lombard/self_feedback.h"
#include "lombard/stats.h"
#include "lombard/stoi.h"

namespace lombard {

inline constexpr int kConfigSchemaVersion = 1;

// How the two groups of a comparison are presented before noise is added.
enum class PresentationMode {
  // Both groups' speech at the A-weighted level of the higher-level
  // recording's self-feedback signal.
  kALevel,
  // Higher-level speech as recorded, lower-level speech energy-matched to
  // it (active-frame RMS); no further level change.
  kEnergy,
};

// Clean reference handed to STOI.
enum class StoiReference { kSelfFeedback, kRecording };

struct NoiseSourceConfig {
  // "corpus" (LTASS of the lowest ladder level), "default", or a CSV path.
  std::string ssn_envelope = "corpus";
  // Empty: babble is built from the corpus's lowest-ladder-level recordings.
  std::vector<std::filesystem::path> babble_sources;
  int babble_talkers = 20;
  // Overrides synthesis for both noise types when set.
  std::optional<std::filesystem::path> external_wav;
};

struct PipelineConfig {
  FeedbackParams feedback;
  StoiConfig stoi;
  MappingParams mapping;
  // Where `mapping` came from: "preset:<name>", "inline", "fit:<path>",
  // "json:<path>".
  std::string mapping_source = "preset:mandarin-lombard-2024";
  double alpha = 0.001;
  std::vector<uint64_t> seeds = {7};
  std::vector<double> ladder;
  CalibrationRef calibration;
  PairedTestMethod test = PairedTestMethod::kStudentT;
  PresentationMode presentation = PresentationMode::kEnergy;
  StoiReference reference = StoiReference::kSelfFeedback;
  // Diagnostic per-speaker tests; never part of the verdict.
  bool per_speaker_tests = false;
  NoiseSourceConfig noise;
};

PipelineConfig DefaultPipelineConfig();

// alpha in (0, 0.5], ladder strictly ascending with >= 2 levels, at least
// one seed, valid STOI and calibration settings.
absl::Status ValidateConfig(const PipelineConfig& config);

// Missing keys keep their defaults. Relative paths resolve against
// `base_dir`. A {"fit_pairs": path} mapping is fitted while loading.
absl::StatusOr<PipelineConfig> ParseConfigJson(
    absl::string_view json, const std::filesystem::path& base_dir);
absl::StatusOr<PipelineConfig> LoadConfig(const std::filesystem::path& path);

std::string ConfigToJson(const PipelineConfig& config);

}  // namespace lombard

#endif  // LOMBARD_CONFIG_H_
