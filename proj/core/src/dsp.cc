// dsp.cc

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
#include <cmath>
#include <numbers>
#include <string>

#include "fft.h"
#include "speechcur/dsp.h"

namespace speechcur {

namespace {

template <typename T>
double RmsDbImpl(std::span<const T> samples) {
  if (samples.empty()) throw ContractError("RmsDb of an empty sequence");
  double sum = 0.0;
  for (T v : samples) sum += static_cast<double>(v) * static_cast<double>(v);
  const double rms = std::sqrt(sum / static_cast<double>(samples.size()));
  return 20.0 * std::log10(std::max(rms, kRmsFloor));
}

// Per-bin magnitudes below this are clamped before taking the log.
constexpr double kMagnitudeFloor = 1e-10;

}  // namespace

double RmsDb(std::span<const float> samples) { return RmsDbImpl(samples); }
double RmsDb(std::span<const double> samples) { return RmsDbImpl(samples); }

std::string_view WindowName(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann:
      return "hann";
    case WindowKind::kHamming:
      return "hamming";
    case WindowKind::kRectangular:
      return "rect";
  }
  return "unknown";
}

WindowKind ParseWindowKind(std::string_view name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "rect") return WindowKind::kRectangular;
  throw ConfigError("stft.window", "unknown window '" + std::string(name) + "'");
}

std::vector<double> StftConfig::Window() const {
  std::vector<double> w(window_len, 1.0);
  const double n = static_cast<double>(window_len);
  for (std::size_t i = 0; i < window_len; ++i) {
    const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
    switch (window) {
      case WindowKind::kHann:
        w[i] = 0.5 - 0.5 * c;
        break;
      case WindowKind::kHamming:
        w[i] = 0.54 - 0.46 * c;
        break;
      case WindowKind::kRectangular:
        break;
    }
  }
  return w;
}

void StftConfig::Validate() const {
  if (window_len < 2) throw ConfigError("stft.window_len", "must be at least 2");
  if (hop == 0 || hop > window_len) {
    throw ConfigError("stft.hop", "must be in (0, window_len]");
  }
  const std::vector<double> w = Window();
  double lo = 0.0, hi = 0.0;
  for (std::size_t r = 0; r < hop; ++r) {
    double sum = 0.0;
    for (std::size_t i = r; i < window_len; i += hop) sum += w[i];
    if (r == 0) {
      lo = hi = sum;
    } else {
      lo = std::min(lo, sum);
      hi = std::max(hi, sum);
    }
  }
  if (!(lo > 0.0) || (hi - lo) > 1e-9 * hi) {
    throw ConfigError("stft.hop", "window '" + std::string(WindowName(window)) +
                                      "' is not constant-overlap-add at hop " +
                                      std::to_string(hop));
  }
}

std::size_t StftSteps(std::size_t len, const StftConfig& cfg) {
  if (len < cfg.window_len) return 0;
  return (len - cfg.window_len) / cfg.hop + 1;
}

Spectrogram Stft(std::span<const float> samples, int sample_rate,
                 const StftConfig& cfg) {
  if (samples.size() < cfg.window_len) {
    throw ContractError("STFT input of " + std::to_string(samples.size()) +
                        " samples is shorter than one window (" +
                        std::to_string(cfg.window_len) + ")");
  }
  const std::vector<double> window = cfg.Window();
  const std::size_t steps = StftSteps(samples.size(), cfg);
  Spectrogram spec(cfg.bins(), steps, sample_rate, cfg.window_len);
  internal::RealFft fft(cfg.window_len);
  std::vector<double> frame(cfg.window_len);
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t offset = t * cfg.hop;
    for (std::size_t i = 0; i < cfg.window_len; ++i) {
      frame[i] = window[i] * static_cast<double>(samples[offset + i]);
    }
    fft.Forward(frame, spec.Step(t));
  }
  return spec;
}

Spectrogram Stft(const AudioBuffer& buf, const StftConfig& cfg) {
  return Stft(buf.view(), buf.sample_rate, cfg);
}

AudioBuffer Istft(const Spectrogram& spec, const StftConfig& cfg) {
  if (spec.window_len() != cfg.window_len || spec.bins() != cfg.bins()) {
    throw ContractError("spectrogram shape (" + std::to_string(spec.bins()) +
                        " bins, window " + std::to_string(spec.window_len()) +
                        ") does not match STFT config window " +
                        std::to_string(cfg.window_len));
  }
  AudioBuffer out;
  out.sample_rate = spec.sample_rate();
  if (spec.steps() == 0) return out;

  const std::vector<double> window = cfg.Window();
  const std::size_t len = (spec.steps() - 1) * cfg.hop + cfg.window_len;
  std::vector<double> acc(len, 0.0);
  std::vector<double> norm(len, 0.0);
  std::vector<double> frame(cfg.window_len);
  internal::RealFft fft(cfg.window_len);
  for (std::size_t t = 0; t < spec.steps(); ++t) {
    fft.Inverse(spec.Step(t), frame);
    const std::size_t offset = t * cfg.hop;
    for (std::size_t i = 0; i < cfg.window_len; ++i) {
      acc[offset + i] += window[i] * frame[i];
      norm[offset + i] += window[i] * window[i];
    }
  }
  const double peak = *std::max_element(norm.begin(), norm.end());
  out.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.samples[i] =
        norm[i] > 1e-10 * peak ? static_cast<float>(acc[i] / norm[i]) : 0.0f;
  }
  return out;
}

double EstimateCutoff(std::span<const float> frame, int sample_rate,
                      const StftConfig& cfg, double rolloff_db) {
  const Spectrogram spec = Stft(frame, sample_rate, cfg);
  std::vector<double> mean_db(spec.bins(), 0.0);
  for (std::size_t t = 0; t < spec.steps(); ++t) {
    const auto step = spec.Step(t);
    for (std::size_t k = 0; k < spec.bins(); ++k) {
      mean_db[k] += 20.0 * std::log10(std::max(std::abs(step[k]), kMagnitudeFloor));
    }
  }
  for (double& v : mean_db) v /= static_cast<double>(spec.steps());

  const double floor_db = 20.0 * std::log10(kMagnitudeFloor);
  const double peak = *std::max_element(mean_db.begin(), mean_db.end());
  if (peak <= floor_db + 1e-9) return 0.0;

  const double threshold = peak - rolloff_db;
  for (std::size_t k = spec.bins(); k-- > 0;) {
    if (mean_db[k] >= threshold) return static_cast<double>(k) * spec.BinHz();
  }
  return 0.0;
}

}  // namespace speechcur
