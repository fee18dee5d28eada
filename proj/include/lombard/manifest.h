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

#ifndef LOMBARD_MANIFEST_H_
#define LOMBARD_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "lombard/noise.h"

namespace lombard {

struct ManifestEntry {
  std::string speaker_id;
  NoiseKind noise_type = NoiseKind::kSsn;
  double level_dba = 0.0;
  std::string sentence_id;
  std::filesystem::path path;
};

// 30, 35, ..., 80 dBA.
std::vector<double> DefaultLadder();

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::vector<double> ladder = DefaultLadder();
};

// Levels are compared at 0.01 dBA resolution.
int64_t LevelKey(double level_dba);

// CSV with header `speaker_id,noise_type,level_dba,sentence_id,path`, or a
// JSON array of objects with the same keys. Relative paths resolve against
// `base_dir`.
absl::StatusOr<CorpusManifest> ParseManifestCsv(
    absl::string_view csv, const std::filesystem::path& base_dir);
absl::StatusOr<CorpusManifest> ParseManifestJson(
    absl::string_view json, const std::filesystem::path& base_dir);
// Dispatches on the .json extension; anything else is read as CSV.
absl::StatusOr<CorpusManifest> LoadManifest(const std::filesystem::path& path);

std::string ManifestToCsv(const CorpusManifest& manifest);

enum class DefectKind {
  kStructural,
  kDuplicate,
  kMissingRecording,
  kMissingFile,
  kUndecodable,
  kLadderGap,
};

absl::string_view DefectKindName(DefectKind kind);

struct ManifestDefect {
  DefectKind kind = DefectKind::kStructural;
  std::string speaker_id;
  std::optional<NoiseKind> noise_type;
  std::optional<double> level_dba;
  std::string sentence_id;
  std::string message;

  std::string ToString() const;
};

struct ValidationReport {
  size_t n_entries = 0;
  std::vector<ManifestDefect> defects;

  bool ok() const { return defects.empty(); }
  std::string ToString() const;
};

struct ValidationOptions {
  bool check_files = true;
  // Parse each WAV header; implies check_files.
  bool probe_audio = true;
  // When set, every ladder level must be present for this noise type.
  std::optional<NoiseKind> require_ladder_for;
};

// Checks the speaker x condition x sentence matrix, duplicates, file
// existence and WAV headers. All defects are collected, never just the
// first one.
ValidationReport ValidateManifest(const CorpusManifest& manifest,
                                  const ValidationOptions& options = {});

}  // namespace lombard

#endif  // LOMBARD_MANIFEST_H_
