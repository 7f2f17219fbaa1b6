// speechcur/audio.h

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

#ifndef SPEECHCUR_AUDIO_H_
#define SPEECHCUR_AUDIO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "speechcur/error.h"

namespace speechcur {

/// Mono sample sequence in [-1, 1] at a fixed sample rate.
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double DurationSeconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
  std::span<const float> view() const { return samples; }
};

/// Sample-wise binary speech decisions, aligned with an AudioBuffer.
struct SpeechMask {
  std::vector<std::uint8_t> decisions;

  std::size_t size() const { return decisions.size(); }
  std::span<const std::uint8_t> view() const { return decisions; }
};

/// Throws ContractError unless the buffer has a positive rate and only finite
/// samples.
void ValidateAudio(const AudioBuffer& buf);

/// Number of samples in `seconds` at `sample_rate`. Throws ContractError when
/// the product is not a positive integer (within 1e-6 samples).
std::size_t SecondsToSamples(int sample_rate, double seconds);

/// Non-owning frame-major view of a sample sequence: column l covers samples
/// [l * frame_len, (l + 1) * frame_len). A trailing partial frame is dropped.
/// The viewed storage must outlive the grid.
template <typename T>
class FrameGrid {
 public:
  FrameGrid() = default;
  FrameGrid(std::span<const T> data, std::size_t frame_len)
      : data_(data),
        frame_len_(frame_len),
        frame_count_(frame_len == 0 ? 0 : data.size() / frame_len) {}

  std::size_t frame_len() const { return frame_len_; }
  std::size_t frame_count() const { return frame_count_; }

  std::span<const T> Frame(std::size_t index) const {
    return data_.subspan(index * frame_len_, frame_len_);
  }

 private:
  std::span<const T> data_;
  std::size_t frame_len_ = 0;
  std::size_t frame_count_ = 0;
};

/// Frames of `frame_seconds` each. Buffers shorter than one frame give an
/// empty grid.
FrameGrid<float> ReshapeFrames(const AudioBuffer& buf, double frame_seconds);
FrameGrid<std::uint8_t> ReshapeFrames(const SpeechMask& mask, int sample_rate,
                                      double frame_seconds);

enum class SampleFormat { kPcm16, kPcm24, kFloat32 };

struct WavWriteStats {
  std::size_t clipped = 0;
};

/// Reads a RIFF/WAVE file holding PCM16, PCM24 or float-32 data in one or two
/// channels. Integer PCM is scaled by 2^-(bits-1); stereo is averaged to mono.
AudioBuffer ReadWav(const std::filesystem::path& path);

/// Writes `buf` as a mono WAV file. Samples outside [-1, 1] are clipped and
/// counted; the count is also logged.
WavWriteStats WriteWav(const std::filesystem::path& path, const AudioBuffer& buf,
                       SampleFormat format = SampleFormat::kFloat32);

}  // namespace speechcur

#endif  // SPEECHCUR_AUDIO_H_
