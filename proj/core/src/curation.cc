// curation.cc

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
#include <string>
#include <utility>

#include "speechcur/config.h"
#include "speechcur/curation.h"

namespace speechcur {

namespace {

bool IsWholeMultiple(double value, double unit) {
  const double ratio = value / unit;
  return std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, ratio);
}

}  // namespace

void CurationConfig::Validate() const {
  if (sample_rate <= 0) throw ConfigError("f_s", "must be a positive integer");
  if (!(segment_seconds > 0.0) || !std::isfinite(segment_seconds)) {
    throw ConfigError("N", "must be a positive number of seconds");
  }
  if (!(frame_seconds > 0.0) || !std::isfinite(frame_seconds)) {
    throw ConfigError("w_l", "must be a positive number of seconds");
  }
  try {
    SecondsToSamples(sample_rate, frame_seconds);
  } catch (const ContractError&) {
    throw ConfigError("w_l", "f_s * w_l must be a whole number of samples");
  }
  if (!IsWholeMultiple(segment_seconds, frame_seconds) ||
      std::round(segment_seconds / frame_seconds) < 1.0) {
    throw ConfigError("N", "must be a positive integer multiple of w_l");
  }
  if (!std::isfinite(snr_threshold_db)) throw ConfigError("s_th", "must be finite");
  if (!(min_bandwidth_hz >= 0.0) || min_bandwidth_hz > sample_rate / 2.0) {
    throw ConfigError("b_w", "must lie in [0, f_s / 2]");
  }
  if (!std::isfinite(rho_max_db)) throw ConfigError("rho_max", "must be finite");
  if (!(rolloff_db > 0.0) || !std::isfinite(rolloff_db)) {
    throw ConfigError("rolloff_db", "must be positive");
  }
  if (round_id < 0) throw ConfigError("round_id", "must be >= 0");
  stft.Validate();
  if (FrameSamples() < stft.window_len) {
    throw ConfigError("w_l", "frame is shorter than the STFT window");
  }
  enhancer.Validate();
  vad.Validate();
  vad.WindowSamples(sample_rate);
}

std::size_t CurationConfig::FrameSamples() const {
  return SecondsToSamples(sample_rate, frame_seconds);
}

std::size_t CurationConfig::FramesPerSegment() const {
  return static_cast<std::size_t>(std::round(segment_seconds / frame_seconds));
}

double FrameSnrDb(std::span<const float> input, std::span<const float> enhanced,
                  std::span<const std::uint8_t> speech, double rho_max_db) {
  if (input.size() != enhanced.size() || input.size() != speech.size()) {
    throw ContractError("frame SNR inputs differ in length (" +
                        std::to_string(input.size()) + ", " +
                        std::to_string(enhanced.size()) + ", " +
                        std::to_string(speech.size()) + ")");
  }
  if (input.empty()) throw ContractError("frame SNR of an empty frame");
  std::size_t voiced = 0;
  for (std::uint8_t v : speech) voiced += v != 0;
  if (2 * voiced < speech.size()) return kRhoSentinel;

  std::vector<double> residual(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    residual[i] = static_cast<double>(input[i]) - static_cast<double>(enhanced[i]);
  }
  const double rho = RmsDb(enhanced) - RmsDb(std::span<const double>(residual));
  return std::min(rho, rho_max_db);
}

std::vector<std::uint8_t> SnrGate(std::span<const double> rho, double threshold_db) {
  std::vector<std::uint8_t> out(rho.size());
  std::transform(rho.begin(), rho.end(), out.begin(),
                 [threshold_db](double r) -> std::uint8_t { return r > threshold_db; });
  return out;
}

BandwidthDecision BandwidthGate(const FrameGrid<float>& frames, int sample_rate,
                                double min_bandwidth_hz, const StftConfig& stft,
                                double rolloff_db) {
  BandwidthDecision out;
  out.accepted.resize(frames.frame_count());
  out.cutoff_hz.resize(frames.frame_count());
  for (std::size_t l = 0; l < frames.frame_count(); ++l) {
    out.cutoff_hz[l] = EstimateCutoff(frames.Frame(l), sample_rate, stft, rolloff_db);
    out.accepted[l] = out.cutoff_hz[l] >= min_bandwidth_hz;
  }
  return out;
}

std::vector<std::uint8_t> CombineGates(std::span<const std::uint8_t> snr_pass,
                                       std::span<const std::uint8_t> bandwidth_pass) {
  if (snr_pass.size() != bandwidth_pass.size()) {
    throw ContractError("gate vectors differ in length (" +
                        std::to_string(snr_pass.size()) + " vs " +
                        std::to_string(bandwidth_pass.size()) + ")");
  }
  std::vector<std::uint8_t> out(snr_pass.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (snr_pass[i] != 0) && (bandwidth_pass[i] != 0);
  }
  return out;
}

std::vector<FrameRange> ExtractSegments(std::span<const std::uint8_t> accepted,
                                        std::size_t frames_per_segment) {
  if (frames_per_segment == 0) throw ContractError("segment length must be >= 1 frame");
  std::vector<FrameRange> out;
  std::size_t run_start = 0;
  std::size_t run_len = 0;
  for (std::size_t i = 0; i <= accepted.size(); ++i) {
    if (i < accepted.size() && accepted[i] != 0) {
      if (run_len == 0) run_start = i;
      if (++run_len == frames_per_segment) {
        out.push_back({run_start, i + 1});
        run_len = 0;
      }
    } else {
      run_len = 0;
    }
  }
  return out;
}

CurationEngine::CurationEngine(CurationConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  enhancer_ = MakeEnhancer(config_.enhancer, config_.stft);
  config_hash_ = ConfigHash(config_);
}

CurationEngine::CurationEngine(CurationConfig config,
                               std::shared_ptr<const Enhancer> enhancer)
    : config_(std::move(config)), enhancer_(std::move(enhancer)) {
  config_.Validate();
  if (!enhancer_) throw ContractError("curation engine needs an enhancer");
  config_hash_ = ConfigHash(config_);
}

FileCuration CurationEngine::Curate(const AudioBuffer& input,
                                    std::string_view source_uri) const {
  if (input.sample_rate != config_.sample_rate) {
    throw ContractError("'" + std::string(source_uri) + "' has sample rate " +
                        std::to_string(input.sample_rate) + " Hz, configured f_s is " +
                        std::to_string(config_.sample_rate) + " Hz");
  }
  ValidateAudio(input);

  FileCuration out;
  out.enhanced = Enhance(*enhancer_, input, source_uri);
  out.speech = DetectSpeech(out.enhanced, config_.vad, source_uri);
  if (out.speech.size() != input.size()) {
    throw ContractError("VAD returned " + std::to_string(out.speech.size()) +
                        " decisions for " + std::to_string(input.size()) + " samples");
  }

  const FrameGrid<float> noisy = ReshapeFrames(input, config_.frame_seconds);
  const FrameGrid<float> enhanced = ReshapeFrames(out.enhanced, config_.frame_seconds);
  const FrameGrid<std::uint8_t> speech =
      ReshapeFrames(out.speech, config_.sample_rate, config_.frame_seconds);

  const std::size_t frames = noisy.frame_count();
  out.frame_rho.resize(frames);
  for (std::size_t l = 0; l < frames; ++l) {
    out.frame_rho[l] = FrameSnrDb(noisy.Frame(l), enhanced.Frame(l), speech.Frame(l),
                                  config_.rho_max_db);
  }
  out.snr_pass = SnrGate(out.frame_rho, config_.snr_threshold_db);
  BandwidthDecision bandwidth =
      BandwidthGate(enhanced, config_.sample_rate, config_.min_bandwidth_hz,
                    config_.stft, config_.rolloff_db);
  out.frame_fc = std::move(bandwidth.cutoff_hz);
  out.bandwidth_pass = std::move(bandwidth.accepted);
  out.accepted = CombineGates(out.snr_pass, out.bandwidth_pass);

  const std::size_t frame_len = noisy.frame_len();
  const std::string enhancer_id = enhancer_->Id();
  for (const FrameRange& r : ExtractSegments(out.accepted, config_.FramesPerSegment())) {
    CuratedSegment seg;
    seg.source_uri = std::string(source_uri);
    seg.round_id = config_.round_id;
    seg.start_sample = static_cast<std::int64_t>(r.begin * frame_len);
    seg.end_sample = static_cast<std::int64_t>(r.end * frame_len);
    seg.sample_rate = config_.sample_rate;
    seg.frame_rho.assign(out.frame_rho.begin() + static_cast<std::ptrdiff_t>(r.begin),
                         out.frame_rho.begin() + static_cast<std::ptrdiff_t>(r.end));
    seg.frame_fc.assign(out.frame_fc.begin() + static_cast<std::ptrdiff_t>(r.begin),
                        out.frame_fc.begin() + static_cast<std::ptrdiff_t>(r.end));
    seg.config_hash = config_hash_;
    seg.enhancer_id = enhancer_id;
    out.segments.push_back(std::move(seg));
  }
  return out;
}

FileCuration CurateFile(const AudioBuffer& input, const CurationConfig& config,
                        std::string_view source_uri) {
  return CurationEngine(config).Curate(input, source_uri);
}

}  // namespace speechcur
