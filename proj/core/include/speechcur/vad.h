// speechcur/vad.h

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

#ifndef SPEECHCUR_VAD_H_
#define SPEECHCUR_VAD_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "speechcur/audio.h"
#include "speechcur/external.h"

namespace speechcur {

enum class VadKind { kEnergy, kAlwaysOn, kExternal };

std::string_view VadKindName(VadKind kind);
VadKind ParseVadKind(std::string_view name);

struct VadSpec {
  VadKind kind = VadKind::kEnergy;
  /// Decision window length in seconds; rounded to the nearest sample count.
  double window_seconds = 0.02;
  /// Energy VAD: a window is speech iff its RMS in dB reaches
  /// max(noise_floor + relative_threshold_db, absolute_floor_db).
  double relative_threshold_db = 15.0;
  double absolute_floor_db = -60.0;
  ExternalCommand external;

  void Validate() const;
  /// Throws ConfigError when the window rounds to zero samples.
  std::size_t WindowSamples(int sample_rate) const;
};

/// Per-window decisions of the energy VAD. The last window may be partial and
/// is scored on its own samples. The noise floor is the 10th percentile of the
/// window levels over the whole buffer.
std::vector<std::uint8_t> EnergyVadWindows(const AudioBuffer& buf, const VadSpec& spec);

/// Sample-aligned speech mask: every sample carries the decision of its window.
/// External VADs return a WAV whose samples >= 0.5 count as speech.
SpeechMask DetectSpeech(const AudioBuffer& buf, const VadSpec& spec,
                        std::string_view source_uri = {});

}  // namespace speechcur

#endif  // SPEECHCUR_VAD_H_
