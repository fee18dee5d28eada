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

#include "lombard/manifest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"
#include "lombard/wav.h"

namespace lombard {
namespace {

constexpr absl::string_view kCsvHeader =
    "speaker_id,noise_type,level_dba,sentence_id,path";

std::filesystem::path Resolve(const std::filesystem::path& base,
                              absl::string_view raw) {
  std::filesystem::path p{std::string(raw)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

absl::StatusOr<NoiseKind> ParseCorpusNoise(absl::string_view raw) {
  auto kind = ParseNoiseKind(raw);
  if (!kind.ok()) return kind.status();
  if (*kind == NoiseKind::kExternal) {
    return absl::InvalidArgumentError(
        "corpus noise_type must be ssn or babble");
  }
  return kind;
}

using ConditionKey = std::pair<NoiseKind, int64_t>;

}  // namespace

std::vector<double> DefaultLadder() {
  std::vector<double> ladder;
  for (int level = 30; level <= 80; level += 5) ladder.push_back(level);
  return ladder;
}

int64_t LevelKey(double level_dba) { return std::llround(level_dba * 100.0); }

absl::StatusOr<CorpusManifest> ParseManifestCsv(
    absl::string_view csv, const std::filesystem::path& base_dir) {
  CorpusManifest manifest;
  int line_no = 0;
  bool header_seen = false;
  for (absl::string_view line : absl::StrSplit(csv, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line != kCsvHeader) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "manifest header must be '%s'", kCsvHeader));
      }
      continue;
    }
    std::vector<absl::string_view> cols = absl::StrSplit(line, ',');
    if (cols.size() != 5) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "manifest line %d: expected 5 columns, got %d", line_no,
          cols.size()));
    }
    for (auto& c : cols) c = absl::StripAsciiWhitespace(c);
    ManifestEntry e;
    e.speaker_id = std::string(cols[0]);
    auto kind = ParseCorpusNoise(cols[1]);
    if (!kind.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "manifest line %d: %s", line_no, kind.status().message()));
    }
    e.noise_type = *kind;
    if (!absl::SimpleAtod(cols[2], &e.level_dba) ||
        !std::isfinite(e.level_dba)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("manifest line %d: bad level '%s'", line_no,
                          cols[2]));
    }
    e.sentence_id = std::string(cols[3]);
    if (e.speaker_id.empty() || e.sentence_id.empty() || cols[4].empty()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("manifest line %d: empty field", line_no));
    }
    e.path = Resolve(base_dir, cols[4]);
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

absl::StatusOr<CorpusManifest> ParseManifestJson(
    absl::string_view json, const std::filesystem::path& base_dir) {
  const auto j = nlohmann::json::parse(json, nullptr, false);
  if (j.is_discarded() || !j.is_array()) {
    return absl::InvalidArgumentError("manifest JSON must be an array");
  }
  CorpusManifest manifest;
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& o = j[i];
    if (!o.is_object() || !o.contains("speaker_id") ||
        !o.contains("noise_type") || !o.contains("level_dba") ||
        !o.contains("sentence_id") || !o.contains("path") ||
        !o["level_dba"].is_number() || !o["path"].is_string() ||
        !o["noise_type"].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("manifest entry %d is missing fields", i));
    }
    auto as_id = [](const nlohmann::json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    ManifestEntry e;
    e.speaker_id = as_id(o["speaker_id"]);
    e.sentence_id = as_id(o["sentence_id"]);
    auto kind = ParseCorpusNoise(o["noise_type"].get<std::string>());
    if (!kind.ok()) return kind.status();
    e.noise_type = *kind;
    e.level_dba = o["level_dba"].get<double>();
    e.path = Resolve(base_dir, o["path"].get<std::string>());
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

absl::StatusOr<CorpusManifest> LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open manifest %s", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto base = path.parent_path();
  if (absl::AsciiStrToLower(path.extension().string()) == ".json") {
    return ParseManifestJson(buffer.str(), base);
  }
  return ParseManifestCsv(buffer.str(), base);
}

std::string ManifestToCsv(const CorpusManifest& manifest) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& e : manifest.entries) {
    out += absl::StrFormat("%s,%s,%g,%s,%s\n", e.speaker_id,
                           NoiseKindName(e.noise_type), e.level_dba,
                           e.sentence_id, e.path.string());
  }
  return out;
}

absl::string_view DefectKindName(DefectKind kind) {
  switch (kind) {
    case DefectKind::kStructural:
      return "structural";
    case DefectKind::kDuplicate:
      return "duplicate";
    case DefectKind::kMissingRecording:
      return "missing-recording";
    case DefectKind::kMissingFile:
      return "missing-file";
    case DefectKind::kUndecodable:
      return "undecodable";
    case DefectKind::kLadderGap:
      return "ladder-gap";
  }
  return "?";
}

std::string ManifestDefect::ToString() const {
  std::vector<std::string> where;
  if (!speaker_id.empty()) where.push_back("speaker=" + speaker_id);
  if (noise_type.has_value()) {
    where.push_back(absl::StrFormat("noise=%s", NoiseKindName(*noise_type)));
  }
  if (level_dba.has_value()) {
    where.push_back(absl::StrFormat("level=%g", *level_dba));
  }
  if (!sentence_id.empty()) where.push_back("sentence=" + sentence_id);
  return absl::StrFormat("[%s] %s%s%s", DefectKindName(kind),
                         absl::StrJoin(where, " "), where.empty() ? "" : ": ",
                         message);
}

std::string ValidationReport::ToString() const {
  std::string out = absl::StrFormat("%d entries, %d defects\n", n_entries,
                                    defects.size());
  for (const auto& d : defects) out += d.ToString() + "\n";
  return out;
}

ValidationReport ValidateManifest(const CorpusManifest& manifest,
                                  const ValidationOptions& options) {
  ValidationReport report;
  report.n_entries = manifest.entries.size();
  auto add = [&](DefectKind kind, const ManifestEntry* e, std::string msg) {
    ManifestDefect d;
    d.kind = kind;
    if (e != nullptr) {
      d.speaker_id = e->speaker_id;
      d.noise_type = e->noise_type;
      d.level_dba = e->level_dba;
      d.sentence_id = e->sentence_id;
    }
    d.message = std::move(msg);
    report.defects.push_back(std::move(d));
  };

  if (manifest.entries.empty()) {
    add(DefectKind::kStructural, nullptr, "manifest has no entries");
    return report;
  }
  for (size_t i = 1; i < manifest.ladder.size(); ++i) {
    if (!(manifest.ladder[i] > manifest.ladder[i - 1])) {
      add(DefectKind::kStructural, nullptr, "ladder is not strictly ascending");
      break;
    }
  }
  if (manifest.ladder.size() < 2) {
    add(DefectKind::kStructural, nullptr, "ladder needs at least two levels");
  }

  std::set<std::string> speakers, sentences;
  std::map<ConditionKey, double> conditions;
  std::map<std::tuple<std::string, NoiseKind, int64_t, std::string>, size_t>
      seen;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& e = manifest.entries[i];
    speakers.insert(e.speaker_id);
    sentences.insert(e.sentence_id);
    conditions.emplace(ConditionKey{e.noise_type, LevelKey(e.level_dba)},
                       e.level_dba);
    const auto key = std::make_tuple(e.speaker_id, e.noise_type,
                                     LevelKey(e.level_dba), e.sentence_id);
    if (!seen.emplace(key, i).second) {
      add(DefectKind::kDuplicate, &e, "recording listed more than once");
    }
  }

  for (const auto& [cond, level] : conditions) {
    for (const auto& speaker : speakers) {
      for (const auto& sentence : sentences) {
        if (seen.count(std::make_tuple(speaker, cond.first, cond.second,
                                       sentence)) == 0) {
          ManifestDefect d;
          d.kind = DefectKind::kMissingRecording;
          d.speaker_id = speaker;
          d.noise_type = cond.first;
          d.level_dba = level;
          d.sentence_id = sentence;
          d.message = "no recording for this speaker/condition/sentence";
          report.defects.push_back(std::move(d));
        }
      }
    }
  }

  if (options.require_ladder_for.has_value()) {
    for (double level : manifest.ladder) {
      if (conditions.count({*options.require_ladder_for, LevelKey(level)}) ==
          0) {
        ManifestDefect d;
        d.kind = DefectKind::kLadderGap;
        d.noise_type = options.require_ladder_for;
        d.level_dba = level;
        d.message = "ladder level has no recordings";
        report.defects.push_back(std::move(d));
      }
    }
  }

  if (options.check_files || options.probe_audio) {
    for (const ManifestEntry& e : manifest.entries) {
      std::error_code ec;
      if (!std::filesystem::is_regular_file(e.path, ec)) {
        add(DefectKind::kMissingFile, &e, "file not found: " + e.path.string());
        continue;
      }
      if (options.probe_audio) {
        auto info = ProbeWav(e.path);
        if (!info.ok()) {
          add(DefectKind::kUndecodable, &e,
              std::string(info.status().message()));
        }
      }
    }
  }
  return report;
}

}  // namespace lombard
