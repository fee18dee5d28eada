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

#include "lombard/config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "lombard/manifest.h"

namespace lombard {
namespace {

using nlohmann::json;

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& raw) {
  std::filesystem::path p(raw);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

template <typename T>
absl::Status Read(const json& obj, const char* key, T* out) {
  if (!obj.contains(key)) return absl::OkStatus();
  try {
    *out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config key '%s': %s", key, e.what()));
  }
  return absl::OkStatus();
}

#define LOMBARD_READ(obj, key, out)                    \
  do {                                                 \
    if (auto _s = Read(obj, key, out); !_s.ok()) return _s; \
  } while (0)

absl::Status ReadMapping(const json& m, const std::filesystem::path& base,
                         PipelineConfig* config) {
  if (m.is_string()) {
    auto preset = MappingPreset(m.get<std::string>());
    if (!preset.ok()) return preset.status();
    config->mapping = *preset;
    config->mapping_source = "preset:" + m.get<std::string>();
    return absl::OkStatus();
  }
  if (!m.is_object()) {
    return absl::InvalidArgumentError("config 'mapping' must be an object");
  }
  if (m.contains("preset")) {
    return ReadMapping(m["preset"], base, config);
  }
  if (m.contains("a") || m.contains("b")) {
    LOMBARD_READ(m, "a", &config->mapping.a);
    LOMBARD_READ(m, "b", &config->mapping.b);
    config->mapping_source = "inline";
    return absl::OkStatus();
  }
  if (m.contains("fit_pairs")) {
    const auto path = Resolve(base, m["fit_pairs"].get<std::string>());
    auto pairs = LoadPairsCsv(path);
    if (!pairs.ok()) return pairs.status();
    auto fit = FitMapping(*pairs);
    if (!fit.ok()) return fit.status();
    config->mapping = fit->params;
    config->mapping_source = "fit:" + path.string();
    return absl::OkStatus();
  }
  if (m.contains("params_json")) {
    const auto path = Resolve(base, m["params_json"].get<std::string>());
    std::ifstream in(path);
    if (!in) {
      return absl::NotFoundError("cannot open mapping " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto params = MappingParamsFromJson(buffer.str());
    if (!params.ok()) return params.status();
    config->mapping = *params;
    config->mapping_source = "json:" + path.string();
    return absl::OkStatus();
  }
  return absl::InvalidArgumentError(
      "config 'mapping' needs preset, a/b, fit_pairs or params_json");
}

}  // namespace

PipelineConfig DefaultPipelineConfig() {
  PipelineConfig config;
  config.ladder = DefaultLadder();
  return config;
}

absl::Status ValidateConfig(const PipelineConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("alpha %g outside (0, 0.5]", config.alpha));
  }
  if (config.ladder.size() < 2) {
    return absl::InvalidArgumentError("ladder needs at least two levels");
  }
  for (size_t i = 1; i < config.ladder.size(); ++i) {
    if (!(config.ladder[i] > config.ladder[i - 1])) {
      return absl::InvalidArgumentError("ladder must be strictly ascending");
    }
  }
  if (config.seeds.empty()) {
    return absl::InvalidArgumentError("config needs at least one seed");
  }
  if (!std::isfinite(config.mapping.a) || !std::isfinite(config.mapping.b) ||
      config.mapping.a == 0.0) {
    return absl::InvalidArgumentError(
        "mapping parameters must be finite with a != 0");
  }
  if (config.noise.babble_talkers < 2) {
    return absl::InvalidArgumentError("babble needs at least two talkers");
  }
  if (auto s = ValidateStoiConfig(config.stoi); !s.ok()) return s;
  if (auto s = ThirdOctaveBank(config.stoi); !s.ok()) return s.status();
  return ValidateCalibration(config.calibration);
}

absl::StatusOr<PipelineConfig> ParseConfigJson(
    absl::string_view text, const std::filesystem::path& base_dir) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  PipelineConfig config = DefaultPipelineConfig();
  int schema = kConfigSchemaVersion;
  LOMBARD_READ(j, "schema_version", &schema);
  if (schema != kConfigSchemaVersion) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "config schema %d not supported (expected %d)", schema,
        kConfigSchemaVersion));
  }
  if (j.contains("feedback")) {
    const json& f = j["feedback"];
    LOMBARD_READ(f, "air_gain", &config.feedback.air_gain);
    LOMBARD_READ(f, "bone_gain", &config.feedback.bone_gain);
    LOMBARD_READ(f, "bone_cutoff_hz", &config.feedback.bone_cutoff_hz);
  }
  if (j.contains("stoi")) {
    const json& s = j["stoi"];
    LOMBARD_READ(s, "work_rate", &config.stoi.work_rate);
    LOMBARD_READ(s, "frame_len", &config.stoi.frame_len);
    LOMBARD_READ(s, "fft_len", &config.stoi.fft_len);
    LOMBARD_READ(s, "n_bands", &config.stoi.n_bands);
    LOMBARD_READ(s, "lowest_center_hz", &config.stoi.lowest_center_hz);
    LOMBARD_READ(s, "seg_frames", &config.stoi.seg_frames);
    LOMBARD_READ(s, "clip_db", &config.stoi.clip_db);
    LOMBARD_READ(s, "silence_range_db", &config.stoi.silence_range_db);
  }
  if (j.contains("mapping")) {
    if (auto s = ReadMapping(j["mapping"], base_dir, &config); !s.ok()) {
      return s;
    }
  }
  LOMBARD_READ(j, "alpha", &config.alpha);
  LOMBARD_READ(j, "seeds", &config.seeds);
  LOMBARD_READ(j, "ladder", &config.ladder);
  if (j.contains("calibration")) {
    LOMBARD_READ(j["calibration"], "dbfs_to_spl_offset",
                 &config.calibration.dbfs_to_spl_offset);
  }
  if (j.contains("test")) {
    auto method = ParsePairedTestMethod(j["test"].get<std::string>());
    if (!method.ok()) return method.status();
    config.test = *method;
  }
  if (j.contains("presentation")) {
    const auto p = j["presentation"].get<std::string>();
    if (p == "a-level") {
      config.presentation = PresentationMode::kALevel;
    } else if (p == "energy") {
      config.presentation = PresentationMode::kEnergy;
    } else {
      return absl::InvalidArgumentError("presentation must be a-level|energy");
    }
  }
  if (j.contains("stoi_reference")) {
    const auto r = j["stoi_reference"].get<std::string>();
    if (r == "self-feedback") {
      config.reference = StoiReference::kSelfFeedback;
    } else if (r == "recording") {
      config.reference = StoiReference::kRecording;
    } else {
      return absl::InvalidArgumentError(
          "stoi_reference must be self-feedback|recording");
    }
  }
  LOMBARD_READ(j, "per_speaker_tests", &config.per_speaker_tests);
  if (j.contains("noise")) {
    const json& n = j["noise"];
    std::string envelope = config.noise.ssn_envelope;
    LOMBARD_READ(n, "ssn_envelope", &envelope);
    config.noise.ssn_envelope = (envelope == "corpus" || envelope == "default")
                                    ? envelope
                                    : Resolve(base_dir, envelope).string();
    std::vector<std::string> babble;
    LOMBARD_READ(n, "babble_sources", &babble);
    for (const auto& b : babble) {
      config.noise.babble_sources.push_back(Resolve(base_dir, b));
    }
    LOMBARD_READ(n, "babble_talkers", &config.noise.babble_talkers);
    if (n.contains("external_wav") && !n["external_wav"].is_null()) {
      config.noise.external_wav =
          Resolve(base_dir, n["external_wav"].get<std::string>());
    }
  }
  if (auto s = ValidateConfig(config); !s.ok()) return s;
  return config;
}

absl::StatusOr<PipelineConfig> LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open config %s", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigJson(buffer.str(), path.parent_path());
}

std::string ConfigToJson(const PipelineConfig& config) {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["feedback"] = {{"air_gain", config.feedback.air_gain},
                   {"bone_gain", config.feedback.bone_gain},
                   {"bone_cutoff_hz", config.feedback.bone_cutoff_hz}};
  j["stoi"] = {{"work_rate", config.stoi.work_rate},
               {"frame_len", config.stoi.frame_len},
               {"fft_len", config.stoi.fft_len},
               {"n_bands", config.stoi.n_bands},
               {"lowest_center_hz", config.stoi.lowest_center_hz},
               {"seg_frames", config.stoi.seg_frames},
               {"clip_db", config.stoi.clip_db},
               {"silence_range_db", config.stoi.silence_range_db}};
  j["mapping"] = {{"a", config.mapping.a}, {"b", config.mapping.b}};
  j["alpha"] = config.alpha;
  j["seeds"] = config.seeds;
  j["ladder"] = config.ladder;
  j["calibration"] = {
      {"dbfs_to_spl_offset", config.calibration.dbfs_to_spl_offset}};
  j["test"] = std::string(PairedTestMethodName(config.test));
  j["presentation"] =
      config.presentation == PresentationMode::kALevel ? "a-level" : "energy";
  j["stoi_reference"] = config.reference == StoiReference::kSelfFeedback
                            ? "self-feedback"
                            : "recording";
  j["per_speaker_tests"] = config.per_speaker_tests;
  json noise;
  noise["ssn_envelope"] = config.noise.ssn_envelope;
  std::vector<std::string> babble;
  for (const auto& p : config.noise.babble_sources) {
    babble.push_back(p.string());
  }
  noise["babble_sources"] = babble;
  noise["babble_talkers"] = config.noise.babble_talkers;
  noise["external_wav"] = config.noise.external_wav.has_value()
                              ? json(config.noise.external_wav->string())
                              : json(nullptr);
  j["noise"] = noise;
  return j.dump(2);
}

}  // namespace lombard
