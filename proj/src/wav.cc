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

#include "lombard/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "absl/strings/str_format.h"
#include "lombard/log.h"

namespace lombard {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back(v >> 8);
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

void PutTag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct ParsedHeader {
  WavInfo info;
  int bytes_per_sample = 0;
  size_t data_offset = 0;
};

absl::StatusOr<ParsedHeader> ParseHeader(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    return absl::DataLossError("not a RIFF/WAVE file or header truncated");
  }
  std::optional<ParsedHeader> header;
  uint16_t format = 0;
  uint16_t bits = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size()) {
        return absl::DataLossError("fmt chunk truncated");
      }
      header.emplace();
      format = ReadU16(bytes.data() + body);
      header->info.channels = ReadU16(bytes.data() + body + 2);
      header->info.sample_rate =
          static_cast<int>(ReadU32(bytes.data() + body + 4));
      bits = ReadU16(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        if (size < 40 || body + 40 > bytes.size()) {
          return absl::DataLossError("extensible fmt chunk truncated");
        }
        format = ReadU16(bytes.data() + body + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!header.has_value()) {
        return absl::DataLossError("data chunk precedes fmt chunk");
      }
      if (header->info.channels <= 0 || header->info.sample_rate <= 0) {
        return absl::DataLossError("fmt chunk has zero channels or rate");
      }
      if (format == kFormatPcm && bits == 16) {
        header->info.encoding = WavEncoding::kPcm16;
      } else if (format == kFormatPcm && bits == 24) {
        header->info.encoding = WavEncoding::kPcm24;
      } else if (format == kFormatPcm && bits == 32) {
        header->info.encoding = WavEncoding::kPcm32;
      } else if (format == kFormatFloat && bits == 32) {
        header->info.encoding = WavEncoding::kFloat32;
      } else {
        return absl::UnimplementedError(absl::StrFormat(
            "unsupported WAV encoding: format tag %d, %d bits", format, bits));
      }
      header->bytes_per_sample = bits / 8;
      header->data_offset = body;
      const size_t frame_bytes =
          static_cast<size_t>(header->bytes_per_sample) *
          header->info.channels;
      size_t available = bytes.size() - body;
      if (size != 0xFFFFFFFFu && size <= available) available = size;
      header->info.frames = available / frame_bytes;
      return *header;
    }
    // Chunks are word aligned.
    pos = body + size + (size & 1);
  }
  return absl::DataLossError(header.has_value() ? "missing data chunk"
                                                : "missing fmt chunk");
}

double DecodeSample(const uint8_t* p, WavEncoding encoding) {
  switch (encoding) {
    case WavEncoding::kPcm16:
      return static_cast<int16_t>(ReadU16(p)) / 32768.0;
    case WavEncoding::kPcm24: {
      int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case WavEncoding::kPcm32:
      return static_cast<int32_t>(ReadU32(p)) / 2147483648.0;
    case WavEncoding::kFloat32: {
      const uint32_t bits = ReadU32(p);
      float f;
      std::memcpy(&f, &bits, sizeof(f));
      return f;
    }
  }
  return 0.0;
}

absl::StatusOr<std::vector<uint8_t>> ReadFile(
    const std::filesystem::path& path, size_t max_bytes) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    return absl::NotFoundError(
        absl::StrFormat("no such file: %s", path.string()));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open: %s", path.string()));
  }
  std::vector<uint8_t> bytes;
  if (max_bytes == 0) {
    bytes.assign(std::istreambuf_iterator<char>(in),
                 std::istreambuf_iterator<char>());
  } else {
    bytes.resize(max_bytes);
    in.read(reinterpret_cast<char*>(bytes.data()),
            static_cast<std::streamsize>(max_bytes));
    bytes.resize(static_cast<size_t>(in.gcount()));
  }
  return bytes;
}

absl::Status WithPath(const absl::Status& status,
                      const std::filesystem::path& path) {
  return absl::Status(status.code(), absl::StrFormat("%s: %s", path.string(),
                                                     status.message()));
}

int BytesPerSample(WavEncoding encoding) {
  switch (encoding) {
    case WavEncoding::kPcm16:
      return 2;
    case WavEncoding::kPcm24:
      return 3;
    case WavEncoding::kPcm32:
    case WavEncoding::kFloat32:
      return 4;
  }
  return 2;
}

}  // namespace

absl::StatusOr<AudioSignal> DecodeWav(std::span<const uint8_t> bytes) {
  auto header = ParseHeader(bytes);
  if (!header.ok()) return header.status();
  const WavInfo& info = header->info;
  if (info.frames == 0) return absl::DataLossError("data chunk is empty");
  AudioSignal signal;
  signal.sample_rate = info.sample_rate;
  signal.samples.assign(info.frames, 0.0);
  const uint8_t* data = bytes.data() + header->data_offset;
  const int stride = header->bytes_per_sample;
  for (size_t i = 0; i < info.frames; ++i) {
    double sum = 0.0;
    for (int c = 0; c < info.channels; ++c) {
      sum += DecodeSample(data + (i * info.channels + c) * stride,
                          info.encoding);
    }
    signal.samples[i] = sum / info.channels;
  }
  if (info.channels > 1) {
    LogWarning(absl::StrFormat("averaged %d-channel WAV to mono",
                               info.channels));
  }
  for (double x : signal.samples) {
    if (!std::isfinite(x)) {
      return absl::DataLossError("WAV contains non-finite float samples");
    }
  }
  return signal;
}

absl::StatusOr<AudioSignal> ReadWav(const std::filesystem::path& path) {
  auto bytes = ReadFile(path, 0);
  if (!bytes.ok()) return bytes.status();
  auto signal = DecodeWav(*bytes);
  if (!signal.ok()) return WithPath(signal.status(), path);
  return signal;
}

absl::StatusOr<WavInfo> ProbeWav(const std::filesystem::path& path) {
  // Headers with large metadata chunks may need more than the first
  // block; fall back to the whole file.
  auto bytes = ReadFile(path, 1 << 16);
  if (!bytes.ok()) return bytes.status();
  auto header = ParseHeader(*bytes);
  if (!header.ok() && bytes->size() == (1u << 16)) {
    bytes = ReadFile(path, 0);
    if (!bytes.ok()) return bytes.status();
    header = ParseHeader(*bytes);
  }
  if (!header.ok()) return WithPath(header.status(), path);
  WavInfo info = header->info;
  // Frame count from the declared size, the probe may not hold all data.
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (!ec) {
    const size_t frame_bytes =
        static_cast<size_t>(header->bytes_per_sample) * info.channels;
    const uint32_t declared =
        ReadU32(bytes->data() + header->data_offset - 4);
    size_t available = file_size - header->data_offset;
    if (declared != 0xFFFFFFFFu && declared <= available) available = declared;
    info.frames = available / frame_bytes;
  }
  if (info.frames == 0) {
    return WithPath(absl::DataLossError("data chunk is empty"), path);
  }
  return info;
}

absl::StatusOr<std::vector<uint8_t>> EncodeWav(const AudioSignal& signal,
                                               WavEncoding encoding,
                                               WavWriteResult* result) {
  if (auto s = ValidateSignal(signal); !s.ok()) return s;
  const int bytes_per_sample = BytesPerSample(encoding);
  const uint32_t data_bytes =
      static_cast<uint32_t>(signal.size() * bytes_per_sample);
  const bool is_float = encoding == WavEncoding::kFloat32;
  const uint32_t fmt_size = is_float ? 18 : 16;

  std::vector<uint8_t> out;
  out.reserve(64 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 0);  // patched below
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, fmt_size);
  PutU16(out, is_float ? kFormatFloat : kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<uint32_t>(signal.sample_rate));
  PutU32(out, static_cast<uint32_t>(signal.sample_rate * bytes_per_sample));
  PutU16(out, static_cast<uint16_t>(bytes_per_sample));
  PutU16(out, static_cast<uint16_t>(8 * bytes_per_sample));
  if (is_float) {
    PutU16(out, 0);
    PutTag(out, "fact");
    PutU32(out, 4);
    PutU32(out, static_cast<uint32_t>(signal.size()));
  }
  PutTag(out, "data");
  PutU32(out, data_bytes);

  size_t clipped = 0;
  for (double x : signal.samples) {
    if (std::fabs(x) > 1.0) {
      ++clipped;
      x = std::clamp(x, -1.0, 1.0);
    }
    switch (encoding) {
      case WavEncoding::kPcm16: {
        const long v = std::clamp(std::lround(x * 32768.0), -32768L, 32767L);
        PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
        break;
      }
      case WavEncoding::kPcm24: {
        const long v =
            std::clamp(std::lround(x * 8388608.0), -8388608L, 8388607L);
        const auto u = static_cast<uint32_t>(static_cast<int32_t>(v));
        out.push_back(u & 0xFF);
        out.push_back((u >> 8) & 0xFF);
        out.push_back((u >> 16) & 0xFF);
        break;
      }
      case WavEncoding::kPcm32: {
        const long long v = std::clamp(std::llround(x * 2147483648.0),
                                       -2147483648LL, 2147483647LL);
        PutU32(out, static_cast<uint32_t>(static_cast<int32_t>(v)));
        break;
      }
      case WavEncoding::kFloat32: {
        const float f = static_cast<float>(x);
        uint32_t bits;
        std::memcpy(&bits, &f, sizeof(bits));
        PutU32(out, bits);
        break;
      }
    }
  }
  const uint32_t riff_size = static_cast<uint32_t>(out.size() - 8);
  for (int i = 0; i < 4; ++i) out[4 + i] = (riff_size >> (8 * i)) & 0xFF;
  if (clipped > 0) {
    LogWarning(absl::StrFormat("clipped %d samples while encoding WAV",
                               clipped));
  }
  if (result != nullptr) result->clipped_samples = clipped;
  return out;
}

absl::StatusOr<WavWriteResult> WriteWav(const AudioSignal& signal,
                                        const std::filesystem::path& path,
                                        WavEncoding encoding) {
  WavWriteResult result;
  auto bytes = EncodeWav(signal, encoding, &result);
  if (!bytes.ok()) return bytes.status();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot open %s for writing", path.string()));
  }
  out.write(reinterpret_cast<const char*>(bytes->data()),
            static_cast<std::streamsize>(bytes->size()));
  if (!out) {
    return absl::DataLossError(
        absl::StrFormat("short write to %s", path.string()));
  }
  return result;
}

}  // namespace lombard
