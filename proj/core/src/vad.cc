// vad.cc

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

#include "speechcur/dsp.h"
#include "speechcur/vad.h"
#include "stats.h"

namespace speechcur {

std::string_view VadKindName(VadKind kind) {
  switch (kind) {
    case VadKind::kEnergy:
      return "energy";
    case VadKind::kAlwaysOn:
      return "always_on";
    case VadKind::kExternal:
      return "external";
  }
  return "unknown";
}

VadKind ParseVadKind(std::string_view name) {
  if (name == "energy") return VadKind::kEnergy;
  if (name == "always_on") return VadKind::kAlwaysOn;
  if (name == "external") return VadKind::kExternal;
  throw ConfigError("vad.kind", "unknown VAD kind '" + std::string(name) + "'");
}

void VadSpec::Validate() const {
  if (!(window_seconds > 0.0) || !std::isfinite(window_seconds)) {
    throw ConfigError("vad.w_v", "must be a positive number of seconds");
  }
  if (!std::isfinite(relative_threshold_db)) {
    throw ConfigError("vad.relative_threshold_db", "must be finite");
  }
  if (!std::isfinite(absolute_floor_db)) {
    throw ConfigError("vad.absolute_floor_db", "must be finite");
  }
  if (kind == VadKind::kExternal) external.Validate("vad");
}

std::size_t VadSpec::WindowSamples(int sample_rate) const {
  const double samples = std::round(window_seconds * sample_rate);
  if (samples < 1.0) {
    throw ConfigError("vad.w_v", "window is shorter than one sample at " +
                                     std::to_string(sample_rate) + " Hz");
  }
  return static_cast<std::size_t>(samples);
}

std::vector<std::uint8_t> EnergyVadWindows(const AudioBuffer& buf, const VadSpec& spec) {
  const std::size_t win = spec.WindowSamples(buf.sample_rate);
  const std::size_t count = (buf.size() + win - 1) / win;
  std::vector<double> level(count);
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t begin = w * win;
    const std::size_t end = std::min(buf.size(), begin + win);
    level[w] = RmsDb(buf.view().subspan(begin, end - begin));
  }
  std::vector<std::uint8_t> speech(count, 0);
  if (count == 0) return speech;

  std::vector<double> sorted = level;
  const double floor = internal::Percentile(sorted, 0.10);
  const double threshold =
      std::max(floor + spec.relative_threshold_db, spec.absolute_floor_db);
  for (std::size_t w = 0; w < count; ++w) speech[w] = level[w] >= threshold ? 1 : 0;
  return speech;
}

SpeechMask DetectSpeech(const AudioBuffer& buf, const VadSpec& spec,
                        std::string_view source_uri) {
  SpeechMask mask;
  switch (spec.kind) {
    case VadKind::kAlwaysOn:
      mask.decisions.assign(buf.size(), 1);
      break;
    case VadKind::kEnergy: {
      const std::size_t win = spec.WindowSamples(buf.sample_rate);
      const std::vector<std::uint8_t> windows = EnergyVadWindows(buf, spec);
      mask.decisions.resize(buf.size());
      for (std::size_t i = 0; i < buf.size(); ++i) mask.decisions[i] = windows[i / win];
      break;
    }
    case VadKind::kExternal: {
      const AudioBuffer scores = RunAudioExchange(buf, spec.external, source_uri, "vad");
      mask.decisions.resize(scores.size());
      for (std::size_t i = 0; i < scores.size(); ++i) {
        mask.decisions[i] = scores.samples[i] >= 0.5f ? 1 : 0;
      }
      break;
    }
  }
  return mask;
}

}  // namespace speechcur
