// speechcur/curation.h

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

#ifndef SPEECHCUR_CURATION_H_
#define SPEECHCUR_CURATION_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speechcur/audio.h"
#include "speechcur/dsp.h"
#include "speechcur/enhance.h"
#include "speechcur/vad.h"

namespace speechcur {

/// Stand-in for minus infinity in frame SNR vectors and manifests.
inline constexpr double kRhoSentinel = -1e9;

struct CurationConfig {
  int sample_rate = 48000;
  /// Duration of one curated segment.
  double segment_seconds = 12.0;
  /// Duration of one scoring frame.
  double frame_seconds = 1.0;
  /// Frames must score strictly above this estimated SNR.
  double snr_threshold_db = 20.0;
  /// Frames must reach at least this cutoff frequency.
  double min_bandwidth_hz = 20000.0;
  /// Upper clamp on the frame SNR estimate.
  double rho_max_db = 100.0;
  /// Relative threshold of the cutoff estimator.
  double rolloff_db = 35.0;
  int round_id = 0;
  StftConfig stft;
  EnhancerSpec enhancer;
  VadSpec vad;

  /// Throws ConfigError naming the first offending field.
  void Validate() const;
  std::size_t FrameSamples() const;
  std::size_t FramesPerSegment() const;
};

/// Estimated SNR of one frame: RMSdB(enhanced) - RMSdB(input - enhanced),
/// clamped to `rho_max_db`, when at least half of the frame is speech;
/// kRhoSentinel otherwise. Throws ContractError on a length mismatch.
double FrameSnrDb(std::span<const float> input, std::span<const float> enhanced,
                  std::span<const std::uint8_t> speech, double rho_max_db = 100.0);

/// 1 where rho > threshold_db (strict).
std::vector<std::uint8_t> SnrGate(std::span<const double> rho, double threshold_db);

struct BandwidthDecision {
  std::vector<std::uint8_t> accepted;
  std::vector<double> cutoff_hz;
};

/// 1 where the frame's estimated cutoff is >= min_bandwidth_hz (inclusive).
BandwidthDecision BandwidthGate(const FrameGrid<float>& frames, int sample_rate,
                                double min_bandwidth_hz, const StftConfig& stft,
                                double rolloff_db = 35.0);

/// Entry-wise AND. Throws ContractError on a length mismatch.
std::vector<std::uint8_t> CombineGates(std::span<const std::uint8_t> snr_pass,
                                       std::span<const std::uint8_t> bandwidth_pass);

struct FrameRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const FrameRange&) const = default;
};

/// Tiles every maximal run of accepted frames, left-aligned, with
/// non-overlapping blocks of `frames_per_segment`. Leftover frames at the end
/// of a run are dropped.
std::vector<FrameRange> ExtractSegments(std::span<const std::uint8_t> accepted,
                                        std::size_t frames_per_segment);

/// One curated block and its per-frame metadata; one manifest record.
struct CuratedSegment {
  std::string source_uri;
  int round_id = 0;
  std::int64_t start_sample = 0;
  std::int64_t end_sample = 0;
  int sample_rate = 0;
  std::vector<double> frame_rho;
  std::vector<double> frame_fc;
  std::string config_hash;
  std::string enhancer_id;

  bool operator==(const CuratedSegment&) const = default;
};

/// Everything computed for one file.
struct FileCuration {
  std::vector<CuratedSegment> segments;
  AudioBuffer enhanced;
  SpeechMask speech;
  std::vector<double> frame_rho;
  std::vector<double> frame_fc;
  std::vector<std::uint8_t> snr_pass;
  std::vector<std::uint8_t> bandwidth_pass;
  std::vector<std::uint8_t> accepted;
};

/// Enhance, detect speech on the enhanced signal, frame all three sequences,
/// score, gate, combine and tile. Holds one enhancer instance; safe to share
/// between threads when the enhancer is.
class CurationEngine {
 public:
  /// Builds the enhancer from `config.enhancer`.
  explicit CurationEngine(CurationConfig config);
  /// Uses a caller-provided enhancer (for instance an in-memory oracle).
  CurationEngine(CurationConfig config, std::shared_ptr<const Enhancer> enhancer);

  const CurationConfig& config() const { return config_; }
  const std::string& config_hash() const { return config_hash_; }
  const Enhancer& enhancer() const { return *enhancer_; }

  /// Throws ContractError when the buffer's rate differs from the configured
  /// one; backend errors propagate.
  FileCuration Curate(const AudioBuffer& input, std::string_view source_uri) const;

 private:
  CurationConfig config_;
  std::shared_ptr<const Enhancer> enhancer_;
  std::string config_hash_;
};

FileCuration CurateFile(const AudioBuffer& input, const CurationConfig& config,
                        std::string_view source_uri);

}  // namespace speechcur

#endif  // SPEECHCUR_CURATION_H_
