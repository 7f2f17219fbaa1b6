// speechcur/quality.h

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

#ifndef SPEECHCUR_QUALITY_H_
#define SPEECHCUR_QUALITY_H_

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "speechcur/audio.h"
#include "speechcur/external.h"

namespace speechcur {

/// Mean over 32 ms (by default) non-overlapping frames of
/// 10 log10(sum ref^2 / sum (ref - deg)^2), each clamped to [-10, 35] dB.
/// Frames whose reference level is at or below -60 dBFS are skipped.
/// Throws ContractError on a length mismatch or when every frame is skipped.
double SegmentalSnr(const AudioBuffer& reference, const AudioBuffer& degraded,
                    double frame_ms = 32.0);

/// Per-frame SNR of `noisy` against `clean`, frames of `frame_samples`.
std::vector<double> FrameTrueSnrDb(const AudioBuffer& clean, const AudioBuffer& noisy,
                                   std::size_t frame_samples);

/// Quality score of `degraded` against `reference`; higher is better.
using QualityMetric =
    std::function<double(const AudioBuffer& reference, const AudioBuffer& degraded)>;

class MetricRegistry {
 public:
  /// Registry holding the built-in "segmental_snr" metric.
  static MetricRegistry WithBuiltins();

  void Register(std::string id, QualityMetric metric);
  /// Throws ContractError for an unknown id.
  const QualityMetric& Get(std::string_view id) const;
  bool Contains(std::string_view id) const;

 private:
  std::map<std::string, QualityMetric, std::less<>> metrics_;
};

/// Metric computed by an external command. The template must contain
/// {reference} and {degraded}; the last non-empty line of its output is parsed
/// as the score.
QualityMetric MakeExternalMetric(ExternalCommand cmd);

struct EvalTriple {
  AudioBuffer clean;
  AudioBuffer noisy;
  AudioBuffer enhanced;
  std::vector<double> true_snr_db;
};

struct QualityDelta {
  double delta = 0.0;
  std::string metric_id;
};

/// Q(enhanced, clean) - Q(noisy, clean).
QualityDelta DeltaQuality(const EvalTriple& triple, std::string_view metric_id,
                          const MetricRegistry& registry = MetricRegistry::WithBuiltins());

}  // namespace speechcur

#endif  // SPEECHCUR_QUALITY_H_
