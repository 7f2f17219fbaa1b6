// speechcur/dsp.h

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

#ifndef SPEECHCUR_DSP_H_
#define SPEECHCUR_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speechcur/audio.h"

namespace speechcur {

/// RMS values below this are treated as this value before taking the log.
inline constexpr double kRmsFloor = 1e-10;
inline constexpr double kRmsFloorDb = -200.0;

/// 20 * log10(sqrt(mean(x^2))), with the RMS floored at kRmsFloor.
/// Throws ContractError on an empty sequence.
double RmsDb(std::span<const float> samples);
double RmsDb(std::span<const double> samples);

enum class WindowKind { kHann, kHamming, kRectangular };

std::string_view WindowName(WindowKind kind);
WindowKind ParseWindowKind(std::string_view name);

struct StftConfig {
  std::size_t window_len = 2048;
  std::size_t hop = 512;
  WindowKind window = WindowKind::kHann;

  /// Default hop of a quarter window.
  static StftConfig WithWindow(std::size_t window_len,
                               WindowKind window = WindowKind::kHann) {
    return StftConfig{window_len, window_len / 4, window};
  }

  /// Throws ConfigError unless window_len >= 2, 0 < hop <= window_len and the
  /// periodic window overlap-adds to a constant at this hop.
  void Validate() const;

  /// Periodic (DFT-even) analysis window of length window_len.
  std::vector<double> Window() const;

  std::size_t bins() const { return window_len / 2 + 1; }
};

/// Complex STFT coefficients; `steps` frames of `bins` each, time-major.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t bins, std::size_t steps, int sample_rate,
              std::size_t window_len)
      : bins_(bins),
        steps_(steps),
        sample_rate_(sample_rate),
        window_len_(window_len),
        data_(bins * steps) {}

  std::size_t bins() const { return bins_; }
  std::size_t steps() const { return steps_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t window_len() const { return window_len_; }
  double BinHz() const {
    return static_cast<double>(sample_rate_) / static_cast<double>(window_len_);
  }

  std::complex<double>& at(std::size_t bin, std::size_t step) {
    return data_[step * bins_ + bin];
  }
  const std::complex<double>& at(std::size_t bin, std::size_t step) const {
    return data_[step * bins_ + bin];
  }
  std::span<std::complex<double>> Step(std::size_t step) {
    return std::span(data_).subspan(step * bins_, bins_);
  }
  std::span<const std::complex<double>> Step(std::size_t step) const {
    return std::span(data_).subspan(step * bins_, bins_);
  }

 private:
  std::size_t bins_ = 0;
  std::size_t steps_ = 0;
  int sample_rate_ = 0;
  std::size_t window_len_ = 0;
  std::vector<std::complex<double>> data_;
};

/// Number of STFT frames for `len` samples: floor((len - w) / hop) + 1, or 0
/// when len < w. No padding is applied.
std::size_t StftSteps(std::size_t len, const StftConfig& cfg);

/// Windowed, hop-strided real FFT. Throws ContractError when the input is
/// shorter than one window.
Spectrogram Stft(std::span<const float> samples, int sample_rate,
                 const StftConfig& cfg);
Spectrogram Stft(const AudioBuffer& buf, const StftConfig& cfg);

/// Weighted overlap-add inverse: each frame is windowed again and the sum is
/// divided by the summed squared window. Output length is
/// (steps - 1) * hop + window_len; the first and last window_len samples have
/// partial coverage.
AudioBuffer Istft(const Spectrogram& spec, const StftConfig& cfg);

/// Cutoff frequency of `frame`: the centre of the highest STFT bin whose
/// time-averaged log magnitude is within `rolloff_db` of the strongest bin.
/// Returns 0 for a silent frame.
double EstimateCutoff(std::span<const float> frame, int sample_rate,
                      const StftConfig& cfg, double rolloff_db = 35.0);

}  // namespace speechcur

#endif  // SPEECHCUR_DSP_H_
