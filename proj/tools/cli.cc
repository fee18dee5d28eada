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

#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "lombard/audio.h"
#include "lombard/classifier.h"
#include "lombard/config.h"
#include "lombard/log.h"
#include "lombard/manifest.h"
#include "lombard/mapping.h"
#include "lombard/noise.h"
#include "lombard/report.h"
#include "lombard/resample.h"
#include "lombard/self_feedback.h"
#include "lombard/status_macros.h"
#include "lombard/stoi.h"
#include "lombard/wav.h"

namespace lombard::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  bool json_errors = false;
  bool verbose = false;
  int jobs = 0;

  std::string config;
  std::string manifest;
  std::string noise = "ssn";
  std::string out;
  std::string format;
  std::vector<uint64_t> seeds;

  double base = 0.0;
  double high = 0.0;

  std::string pairs;
  bool json = false;

  std::string kind = "ssn";
  double level = 65.0;
  double seconds = 1.0;
  uint64_t seed = 7;
  int rate = 16000;
  std::string ltass;
  int talkers = 20;
  std::vector<std::string> babble_sources;
  std::string external;
  bool float_out = false;

  std::string in;
  std::optional<double> air_gain, bone_gain, cutoff;

  std::string clean;
  std::string degraded;

  std::vector<std::string> inputs;
  std::optional<double> ltass_level;
};

absl::StatusOr<PipelineConfig> LoadOrDefault(const std::string& path) {
  if (path.empty()) return DefaultPipelineConfig();
  return LoadConfig(path);
}

absl::Status Emit(const std::string& text, const std::string& path,
                  std::ostream& out) {
  if (path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  return WriteTextFile(path, text);
}

absl::StatusOr<ReportFormat> FormatFor(const Options& o) {
  if (!o.format.empty()) return ParseReportFormat(o.format);
  return o.out.empty() ? ReportFormat::kText : ReportFormatForPath(o.out);
}

absl::StatusOr<CorpusManifest> LoadCheckedManifest(
    const Options& o, const PipelineConfig& config, NoiseKind noise) {
  ASSIGN_OR_RETURN(CorpusManifest manifest, LoadManifest(o.manifest));
  manifest.ladder = config.ladder;
  CorpusManifest subset;
  subset.ladder = config.ladder;
  for (const auto& e : manifest.entries) {
    if (e.noise_type == noise) subset.entries.push_back(e);
  }
  ValidationOptions options;
  options.require_ladder_for = noise;
  const ValidationReport report = ValidateManifest(subset, options);
  if (!report.ok()) {
    return absl::FailedPreconditionError(report.ToString());
  }
  return manifest;
}

absl::Status Classify(const Options& o, std::ostream& out) {
  ASSIGN_OR_RETURN(PipelineConfig config, LoadOrDefault(o.config));
  if (!o.seeds.empty()) config.seeds = o.seeds;
  ASSIGN_OR_RETURN(const NoiseKind noise, ParseNoiseKind(o.noise));
  ASSIGN_OR_RETURN(const ReportFormat format, FormatFor(o));
  ASSIGN_OR_RETURN(const CorpusManifest manifest,
                   LoadCheckedManifest(o, config, noise));
  std::vector<LadderResult> results;
  for (uint64_t seed : config.seeds) {
    ASSIGN_OR_RETURN(LadderResult r,
                     ClassifyLadder(manifest, noise, config, seed, o.jobs));
    results.push_back(std::move(r));
  }
  std::string text;
  if (format == ReportFormat::kJson && results.size() > 1) {
    text = RenderJsonArray(results);
  } else {
    for (size_t i = 0; i < results.size(); ++i) {
      if (i > 0) text += "\n";
      text += RenderReport(results[i], format);
    }
  }
  return Emit(text, o.out, out);
}

absl::Status EvaluatePairCommand(const Options& o, std::ostream& out) {
  ASSIGN_OR_RETURN(PipelineConfig config, LoadOrDefault(o.config));
  ASSIGN_OR_RETURN(const NoiseKind noise, ParseNoiseKind(o.noise));
  ASSIGN_OR_RETURN(const ReportFormat format, FormatFor(o));
  ASSIGN_OR_RETURN(const CorpusManifest manifest,
                   LoadCheckedManifest(o, config, noise));
  const uint64_t seed = o.seeds.empty() ? config.seeds.front() : o.seeds[0];
  ASSIGN_OR_RETURN(const ComparisonRecord record,
                   EvaluatePair(manifest, noise, o.base, o.high, config, seed,
                                o.jobs));
  return Emit(RenderComparison(record, format), o.out, out);
}

absl::Status FitMap(const Options& o, std::ostream& out) {
  ASSIGN_OR_RETURN(const auto pairs, LoadPairsCsv(o.pairs));
  ASSIGN_OR_RETURN(const FitReport fit, FitMapping(pairs));
  std::string text;
  if (o.json || ReportFormatForPath(o.out) == ReportFormat::kJson) {
    text = FitReportToJson(fit) + "\n";
  } else {
    text = absl::StrFormat(
        "a = %.4f\nb = %.4f\nrmse = %.4f\nrho = %.4f%s\niterations = %d%s\n",
        fit.params.a, fit.params.b, fit.rmse, fit.rho,
        fit.rho_defined ? "" : " (undefined)", fit.iterations,
        fit.converged ? "" : " (not converged)");
  }
  return Emit(text, o.out, out);
}

absl::StatusOr<AudioSignal> ReadAt(const std::string& path, int rate) {
  ASSIGN_OR_RETURN(AudioSignal signal, ReadWav(path));
  if (signal.sample_rate == rate) return signal;
  return Resample(signal, rate);
}

absl::Status GenNoise(const Options& o, std::ostream& out) {
  ASSIGN_OR_RETURN(const NoiseKind kind, ParseNoiseKind(o.kind));
  NoiseSpec spec;
  spec.kind = kind;
  spec.level_dba = o.level;
  spec.seed = o.seed;
  spec.duration_seconds = o.seconds;
  RETURN_IF_ERROR(ValidateNoiseSpec(spec));
  const CalibrationRef cal;
  AudioSignal noise;
  if (kind == NoiseKind::kSsn) {
    SpectrumEnvelope envelope = DefaultSpeechEnvelope();
    if (!o.ltass.empty()) {
      ASSIGN_OR_RETURN(envelope, LoadEnvelopeCsv(o.ltass));
    }
    ASSIGN_OR_RETURN(noise, GenerateSsn(envelope, spec, cal, o.rate));
  } else if (kind == NoiseKind::kBabble) {
    if (o.babble_sources.empty()) {
      return absl::InvalidArgumentError(
          "babble needs --babble-sources wav files");
    }
    std::vector<AudioSignal> streams;
    for (const auto& path : o.babble_sources) {
      ASSIGN_OR_RETURN(AudioSignal s, ReadAt(path, o.rate));
      streams.push_back(std::move(s));
    }
    BabbleOptions options;
    options.n_talkers = o.talkers;
    ASSIGN_OR_RETURN(noise, AssembleBabble(streams, spec, cal, options));
  } else {
    if (o.external.empty()) {
      return absl::InvalidArgumentError("external noise needs --external");
    }
    ASSIGN_OR_RETURN(AudioSignal ext, ReadAt(o.external, o.rate));
    const auto n = static_cast<size_t>(std::lround(o.seconds * o.rate));
    if (ext.size() < n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "external noise lasts %.3f s, %.3f s requested",
          ext.duration_seconds(), o.seconds));
    }
    ext.samples.resize(n);
    ASSIGN_OR_RETURN(noise, ScaleToLevel(ext, o.level, cal));
  }
  ASSIGN_OR_RETURN(const WavWriteResult written,
                   WriteWav(noise, o.out,
                            o.float_out ? WavEncoding::kFloat32
                                        : WavEncoding::kPcm16));
  if (written.clipped_samples > 0) {
    LogWarning(absl::StrFormat("%d samples clipped", written.clipped_samples));
  }
  ASSIGN_OR_RETURN(const double level, AWeightedLevel(noise, cal));
  out << absl::StrFormat("wrote %s: %.3f s, %.2f dBA\n", o.out,
                         noise.duration_seconds(), level);
  return absl::OkStatus();
}

absl::Status SelfFeedbackCommand(const Options& o, std::ostream& out) {
  ASSIGN_OR_RETURN(PipelineConfig config, LoadOrDefault(o.config));
  if (o.air_gain) config.feedback.air_gain = *o.air_gain;
  if (o.bone_gain) config.feedback.bone_gain = *o.bone_gain;
  if (o.cutoff) config.feedback.bone_cutoff_hz = *o.cutoff;
  ASSIGN_OR_RETURN(const AudioSignal in, ReadWav(o.in));
  ASSIGN_OR_RETURN(const AudioSignal fb,
                   ApplySelfFeedback(in, config.feedback));
  ASSIGN_OR_RETURN(const WavWriteResult written,
                   WriteWav(fb, o.out,
                            o.float_out ? WavEncoding::kFloat32
                                        : WavEncoding::kPcm16));
  if (written.clipped_samples > 0) {
    LogWarning(absl::StrFormat("%d samples clipped; use --float to keep them",
                               written.clipped_samples));
  }
  out << absl::StrFormat("wrote %s\n", o.out);
  return absl::OkStatus();
}

absl::Status StoiCommand(const Options& o, std::ostream& out) {
  ASSIGN_OR_RETURN(PipelineConfig config, LoadOrDefault(o.config));
  ASSIGN_OR_RETURN(const AudioSignal clean, ReadWav(o.clean));
  ASSIGN_OR_RETURN(const AudioSignal degraded, ReadWav(o.degraded));
  ASSIGN_OR_RETURN(const double d, Stoi(clean, degraded, config.stoi));
  out << absl::StrFormat("%.6f\n", d);
  return absl::OkStatus();
}

absl::Status Ltass(const Options& o, std::ostream& out) {
  std::vector<AudioSignal> signals;
  std::vector<std::string> paths = o.inputs;
  if (!o.manifest.empty()) {
    ASSIGN_OR_RETURN(const NoiseKind noise, ParseNoiseKind(o.noise));
    ASSIGN_OR_RETURN(const CorpusManifest manifest, LoadManifest(o.manifest));
    const double level =
        o.ltass_level.value_or(manifest.ladder.empty() ? 0.0
                                                       : manifest.ladder[0]);
    for (const auto& e : manifest.entries) {
      if (e.noise_type == noise && LevelKey(e.level_dba) == LevelKey(level)) {
        paths.push_back(e.path.string());
      }
    }
  }
  if (paths.empty()) {
    return absl::InvalidArgumentError("ltass needs input wav files");
  }
  for (const auto& path : paths) {
    ASSIGN_OR_RETURN(AudioSignal s, ReadWav(path));
    signals.push_back(std::move(s));
  }
  ASSIGN_OR_RETURN(const SpectrumEnvelope env, EstimateLtass(signals));
  return Emit(EnvelopeToCsv(env), o.out, out);
}

absl::Status Validate(const Options& o, std::ostream& out) {
  ASSIGN_OR_RETURN(PipelineConfig config, LoadOrDefault(o.config));
  ASSIGN_OR_RETURN(CorpusManifest manifest, LoadManifest(o.manifest));
  manifest.ladder = config.ladder;
  ValidationOptions options;
  if (!o.noise.empty()) {
    ASSIGN_OR_RETURN(const NoiseKind noise, ParseNoiseKind(o.noise));
    options.require_ladder_for = noise;
  }
  const ValidationReport report = ValidateManifest(manifest, options);
  if (!report.ok()) return absl::FailedPreconditionError(report.ToString());
  out << report.ToString() << "\n";
  return absl::OkStatus();
}

std::string CodeName(absl::StatusCode code) {
  return absl::StatusCodeToString(code);
}

void ReportError(const std::string& command, const absl::Status& status,
                 bool json_errors, std::ostream& err) {
  if (json_errors) {
    nlohmann::json j = {{"error", CodeName(status.code())},
                        {"message", std::string(status.message())},
                        {"command", command},
                        {"exit_code", ExitCodeFor(status)}};
    err << j.dump() << "\n";
  } else {
    err << "error: " << status.message() << "\n";
  }
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kOutOfRange:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  o.jobs = std::max(1u, std::thread::hardware_concurrency());

  CLI::App app{"Lombard flavor classification toolkit", "lombard"};
  app.set_version_flag(
      "--version",
      absl::StrFormat("lombard %s (config schema %d)", LOMBARD_VERSION,
                      kConfigSchemaVersion));
  app.add_flag("--json-errors", o.json_errors,
               "Print errors as one JSON line on stderr");
  app.add_flag("-v,--verbose", o.verbose, "Log progress");
  app.add_option("-j,--jobs", o.jobs, "Worker threads (default: all CPUs)")
      ->check(CLI::PositiveNumber);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* classify = app.add_subcommand(
      "classify", "Walk the level ladder and report Lombard flavors");
  classify->add_option("--manifest", o.manifest, "Corpus manifest (csv|json)")
      ->required();
  classify->add_option("--noise", o.noise, "Noise condition: ssn|babble");
  classify->add_option("--config", o.config, "Pipeline config (json)");
  classify->add_option("--out", o.out, "Report path (.txt|.csv|.json)");
  classify->add_option("--format", o.format, "text|csv|json");
  classify->add_option("--seed", o.seeds, "Override the config's seeds");

  auto* pair = app.add_subcommand("evaluate-pair",
                                  "Compare two ladder levels of a corpus");
  pair->add_option("--manifest", o.manifest, "Corpus manifest")->required();
  pair->add_option("--noise", o.noise, "Noise condition: ssn|babble");
  pair->add_option("--config", o.config, "Pipeline config (json)");
  pair->add_option("--base", o.base, "Lower level (dBA)")->required();
  pair->add_option("--high", o.high, "Higher level (dBA)")->required();
  pair->add_option("--seed", o.seeds, "Noise seed");
  pair->add_option("--out", o.out, "Output path");
  pair->add_option("--format", o.format, "text|csv|json");

  auto* fit = app.add_subcommand("fit-map", "Fit the STOI to WCR mapping");
  fit->add_option("--pairs", o.pairs, "CSV of stoi,wcr pairs")->required();
  fit->add_option("--out", o.out, "Output path");
  fit->add_flag("--json", o.json, "JSON output");

  auto* gen = app.add_subcommand("gen-noise", "Write a noise WAV");
  gen->add_option("--kind", o.kind, "ssn|babble|external");
  gen->add_option("--level", o.level, "Level (dBA)");
  gen->add_option("--seconds", o.seconds, "Duration (s)");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--rate", o.rate, "Sample rate (Hz)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--ltass", o.ltass, "SSN envelope CSV (center_hz,level_db)");
  gen->add_option("--talkers", o.talkers, "Babble talker count");
  gen->add_option("--babble-sources", o.babble_sources, "Babble source WAVs");
  gen->add_option("--external", o.external, "External noise WAV");
  gen->add_option("--out", o.out, "Output WAV")->required();
  gen->add_flag("--float", o.float_out, "Write 32-bit float samples");

  auto* fb = app.add_subcommand("self-feedback",
                                "Apply the self-feedback voice model");
  fb->add_option("--in", o.in, "Input WAV")->required();
  fb->add_option("--out", o.out, "Output WAV")->required();
  fb->add_option("--config", o.config, "Pipeline config (json)");
  fb->add_option("--air-gain", o.air_gain, "Air-conduction gain");
  fb->add_option("--bone-gain", o.bone_gain, "Bone-conduction gain");
  fb->add_option("--cutoff", o.cutoff, "Bone-conduction cutoff (Hz)");
  fb->add_flag("--float", o.float_out, "Write 32-bit float samples");

  auto* stoi = app.add_subcommand("stoi", "Score a degraded signal with STOI");
  stoi->add_option("--clean", o.clean, "Clean reference WAV")->required();
  stoi->add_option("--degraded", o.degraded, "Degraded WAV")->required();
  stoi->add_option("--config", o.config, "Pipeline config (json)");

  auto* ltass = app.add_subcommand(
      "ltass", "Estimate a long-term average speech spectrum");
  ltass->add_option("inputs", o.inputs, "Speech WAVs");
  ltass->add_option("--manifest", o.manifest, "Use corpus recordings");
  ltass->add_option("--noise", o.noise, "Corpus noise condition");
  ltass->add_option("--level", o.ltass_level,
                    "Corpus level (default: lowest ladder level)");
  ltass->add_option("--out", o.out, "Envelope CSV");

  auto* validate = app.add_subcommand("validate", "Check a corpus manifest");
  validate->add_option("--manifest", o.manifest, "Corpus manifest")
      ->required();
  validate->add_option("--config", o.config, "Pipeline config (json)");
  validate->add_option("--noise", o.noise,
                       "Require the full ladder for this condition");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    if (o.json_errors) {
      nlohmann::json j = {{"error", "USAGE"},
                          {"message", e.what()},
                          {"exit_code", kExitValidation}};
      err << j.dump() << "\n";
    } else {
      app.exit(e, out, err);
    }
    return kExitValidation;
  }

  SetMinLogLevel(o.verbose ? LogLevel::kInfo : LogLevel::kWarning);
  if (o.json_errors) {
    SetLogSink([&err](LogLevel level, absl::string_view message) {
      static constexpr const char* kNames[] = {"debug", "info", "warning",
                                               "error"};
      nlohmann::json j = {{"level", kNames[static_cast<int>(level)]},
                          {"message", std::string(message)}};
      err << j.dump() << "\n";
    });
  } else {
    SetLogSink(nullptr);
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  absl::Status status;
  if (sub == classify) {
    status = Classify(o, out);
  } else if (sub == pair) {
    status = EvaluatePairCommand(o, out);
  } else if (sub == fit) {
    status = FitMap(o, out);
  } else if (sub == gen) {
    status = GenNoise(o, out);
  } else if (sub == fb) {
    status = SelfFeedbackCommand(o, out);
  } else if (sub == stoi) {
    status = StoiCommand(o, out);
  } else if (sub == ltass) {
    status = Ltass(o, out);
  } else if (sub == validate) {
    status = Validate(o, out);
  }
  SetLogSink(nullptr);
  if (!status.ok()) {
    ReportError(name, status, o.json_errors, err);
    return ExitCodeFor(status);
  }
  return kExitOk;
}

}  // namespace lombard::cli
