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

#ifndef LOMBARD_WAV_H_
#define LOMBARD_WAV_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "lombard/audio.h"

namespace lombard {

enum class WavEncoding { kPcm16, kPcm24, kPcm32, kFloat32 };

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  WavEncoding encoding = WavEncoding::kPcm16;
  size_t frames = 0;
};

struct WavWriteResult {
  // Samples with |x| > 1 that were clipped to full scale.
  size_t clipped_samples = 0;
};

// Error codes: kNotFound for a missing file, kDataLoss for a malformed or
// truncated header, kUnimplemented for an unsupported sample encoding.
// Multichannel files are averaged to mono with a logged warning.
absl::StatusOr<AudioSignal> ReadWav(const std::filesystem::path& path);
absl::StatusOr<AudioSignal> DecodeWav(std::span<const uint8_t> bytes);

// Parses the header only; used for cheap corpus validation.
absl::StatusOr<WavInfo> ProbeWav(const std::filesystem::path& path);

absl::StatusOr<WavWriteResult> WriteWav(
    const AudioSignal& signal, const std::filesystem::path& path,
    WavEncoding encoding = WavEncoding::kPcm16);
absl::StatusOr<std::vector<uint8_t>> EncodeWav(
    const AudioSignal& signal, WavEncoding encoding,
    WavWriteResult* result = nullptr);

}  // namespace lombard

#endif  // LOMBARD_WAV_H_
