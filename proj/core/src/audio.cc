// audio.cc

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

#include <cmath>
#include <string>

#include "speechcur/audio.h"

namespace speechcur {

void ValidateAudio(const AudioBuffer& buf) {
  if (buf.sample_rate <= 0) {
    throw ContractError("audio buffer has non-positive sample rate " +
                        std::to_string(buf.sample_rate));
  }
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    if (!std::isfinite(buf.samples[i])) {
      throw ContractError("audio buffer has non-finite sample at index " +
                          std::to_string(i));
    }
  }
}

std::size_t SecondsToSamples(int sample_rate, double seconds) {
  const double exact = static_cast<double>(sample_rate) * seconds;
  const double rounded = std::round(exact);
  if (!(seconds > 0.0) || rounded < 1.0 || std::abs(exact - rounded) > 1e-6) {
    throw ContractError(std::to_string(seconds) + " s at " +
                        std::to_string(sample_rate) +
                        " Hz is not a whole positive number of samples");
  }
  return static_cast<std::size_t>(rounded);
}

FrameGrid<float> ReshapeFrames(const AudioBuffer& buf, double frame_seconds) {
  return FrameGrid<float>(buf.view(),
                          SecondsToSamples(buf.sample_rate, frame_seconds));
}

FrameGrid<std::uint8_t> ReshapeFrames(const SpeechMask& mask, int sample_rate,
                                      double frame_seconds) {
  return FrameGrid<std::uint8_t>(mask.view(),
                                 SecondsToSamples(sample_rate, frame_seconds));
}

}  // namespace speechcur
