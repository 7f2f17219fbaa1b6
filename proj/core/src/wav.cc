// wav.cc

// Copyright 2026  speechcur authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include <spdlog/spdlog.h>

#include "speechcur/audio.h"

namespace speechcur {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t LoadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t LoadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void StoreU16(std::string* out, std::uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

void StoreU32(std::string* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

[[noreturn]] void Malformed(const std::filesystem::path& path,
                            const std::string& reason) {
  throw FormatError(path.string() + ": " + reason);
}

float DecodeSample(const unsigned char* p, const FmtChunk& fmt) {
  if (fmt.format == kFormatFloat) {
    return std::bit_cast<float>(LoadU32(p));
  }
  if (fmt.bits == 16) {
    const auto v = static_cast<std::int16_t>(LoadU16(p));
    return static_cast<float>(v / 32768.0);
  }
  // 24-bit: sign-extend from the top byte.
  std::int32_t v = static_cast<std::int32_t>(p[0]) |
                   (static_cast<std::int32_t>(p[1]) << 8) |
                   (static_cast<std::int32_t>(static_cast<std::int8_t>(p[2])) << 16);
  return static_cast<float>(v / 8388608.0);
}

}  // namespace

AudioBuffer ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 ||
      std::memcmp(data + 8, "WAVE", 4) != 0) {
    Malformed(path, "not a RIFF/WAVE file");
  }

  FmtChunk fmt;
  bool have_fmt = false;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char* id = data + pos;
    std::size_t chunk_size = LoadU32(data + pos + 4);
    pos += 8;
    const std::size_t available = size - pos;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_size < 16 || chunk_size > available) Malformed(path, "truncated fmt chunk");
      const unsigned char* f = data + pos;
      fmt.format = LoadU16(f);
      fmt.channels = LoadU16(f + 2);
      fmt.sample_rate = LoadU32(f + 4);
      fmt.block_align = LoadU16(f + 12);
      fmt.bits = LoadU16(f + 14);
      if (fmt.format == kFormatExtensible) {
        if (chunk_size < 40) Malformed(path, "truncated WAVE_FORMAT_EXTENSIBLE header");
        fmt.format = LoadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      // Some streaming writers leave the size at 0 or 0xFFFFFFFF.
      if (chunk_size > available || chunk_size == 0) chunk_size = available;
      payload = data + pos;
      payload_size = chunk_size;
    }
    if (chunk_size > available) break;
    pos += chunk_size + (chunk_size & 1);
  }

  if (!have_fmt) Malformed(path, "missing fmt chunk");
  if (payload == nullptr) Malformed(path, "missing data chunk");

  const bool pcm_ok = fmt.format == kFormatPcm && (fmt.bits == 16 || fmt.bits == 24);
  const bool float_ok = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm_ok && !float_ok) {
    throw FormatError(path.string() + ": unsupported codec (format " +
                      std::to_string(fmt.format) + ", " +
                      std::to_string(fmt.bits) + " bits)");
  }
  if (fmt.channels != 1 && fmt.channels != 2) {
    throw FormatError(path.string() + ": unsupported channel count " +
                      std::to_string(fmt.channels));
  }
  if (fmt.sample_rate == 0) Malformed(path, "zero sample rate");
  const std::size_t bytes_per_sample = fmt.bits / 8;
  if (fmt.block_align != bytes_per_sample * fmt.channels) {
    Malformed(path, "block align does not match channels and bit depth");
  }

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(fmt.sample_rate);
  const std::size_t frames = payload_size / fmt.block_align;
  buf.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = payload + i * fmt.block_align;
    float value = DecodeSample(p, fmt);
    if (fmt.channels == 2) {
      value = static_cast<float>(
          (static_cast<double>(value) + DecodeSample(p + bytes_per_sample, fmt)) / 2.0);
    }
    if (!std::isfinite(value)) {
      Malformed(path, "non-finite sample at frame " + std::to_string(i));
    }
    buf.samples[i] = value;
  }
  return buf;
}

WavWriteStats WriteWav(const std::filesystem::path& path, const AudioBuffer& buf,
                       SampleFormat format) {
  ValidateAudio(buf);
  const std::uint16_t bits =
      format == SampleFormat::kPcm16 ? 16 : format == SampleFormat::kPcm24 ? 24 : 32;
  const std::uint16_t code = format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t bytes_per_sample = bits / 8;
  const std::uint64_t data_size = buf.samples.size() * bytes_per_sample;
  if (data_size + 36 > 0xFFFFFFFFull) {
    throw IoError(path.string() + ": audio too long for a RIFF container");
  }

  std::string out;
  out.reserve(44 + data_size);
  out.append("RIFF");
  StoreU32(&out, static_cast<std::uint32_t>(36 + data_size));
  out.append("WAVE");
  out.append("fmt ");
  StoreU32(&out, 16);
  StoreU16(&out, code);
  StoreU16(&out, 1);
  StoreU32(&out, static_cast<std::uint32_t>(buf.sample_rate));
  StoreU32(&out, static_cast<std::uint32_t>(buf.sample_rate) * bytes_per_sample);
  StoreU16(&out, static_cast<std::uint16_t>(bytes_per_sample));
  StoreU16(&out, bits);
  out.append("data");
  StoreU32(&out, static_cast<std::uint32_t>(data_size));

  WavWriteStats stats;
  for (float s : buf.samples) {
    if (s > 1.0f || s < -1.0f) {
      ++stats.clipped;
      s = std::clamp(s, -1.0f, 1.0f);
    }
    switch (format) {
      case SampleFormat::kFloat32:
        StoreU32(&out, std::bit_cast<std::uint32_t>(s));
        break;
      case SampleFormat::kPcm16: {
        const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
        StoreU16(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        break;
      }
      case SampleFormat::kPcm24: {
        const double q = std::clamp(std::round(s * 8388608.0), -8388608.0, 8388607.0);
        const auto v = static_cast<std::uint32_t>(static_cast<std::int32_t>(q));
        out.push_back(static_cast<char>(v & 0xFF));
        out.push_back(static_cast<char>((v >> 8) & 0xFF));
        out.push_back(static_cast<char>((v >> 16) & 0xFF));
        break;
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(path.string() + ": cannot open for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError(path.string() + ": write failed");
  if (stats.clipped > 0) {
    spdlog::warn("{}: clipped {} samples outside [-1, 1]", path.string(), stats.clipped);
  }
  return stats;
}

}  // namespace speechcur
