// speechcur/enhance.h

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

#ifndef SPEECHCUR_ENHANCE_H_
#define SPEECHCUR_ENHANCE_H_

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "speechcur/audio.h"
#include "speechcur/dsp.h"
#include "speechcur/external.h"

namespace speechcur {

enum class EnhancerKind { kIdentity, kSpectralGate, kOracle, kExternal };

std::string_view EnhancerKindName(EnhancerKind kind);
EnhancerKind ParseEnhancerKind(std::string_view name);

struct EnhancerSpec {
  EnhancerKind kind = EnhancerKind::kIdentity;
  /// Label recorded in manifests; derived from the parameters when empty.
  std::string label;

  // spectral_gate
  double gate_threshold_db = 20.0;
  double attenuation_db = 20.0;

  // oracle: the clean reference has the same filename as the source, inside
  // this directory.
  std::filesystem::path reference_dir;

  // external
  ExternalCommand external;

  void Validate() const;
  std::string Id() const;
};

/// A speech enhancer. Implementations must return a buffer with exactly the
/// input's length and sample rate.
class Enhancer {
 public:
  virtual ~Enhancer() = default;
  virtual AudioBuffer Process(const AudioBuffer& input,
                              std::string_view source_uri) const = 0;
  virtual std::string Id() const = 0;
};

using ReferenceResolver = std::function<AudioBuffer(std::string_view source_uri)>;

std::unique_ptr<Enhancer> MakeEnhancer(const EnhancerSpec& spec,
                                       const StftConfig& stft);

/// Oracle enhancer backed by an arbitrary reference lookup.
std::unique_ptr<Enhancer> MakeOracleEnhancer(ReferenceResolver resolver,
                                             std::string id = "oracle");

/// Runs `enhancer` and enforces the shape contract. A length or rate mismatch
/// throws ContractError; nothing is padded or trimmed here.
AudioBuffer Enhance(const Enhancer& enhancer, const AudioBuffer& input,
                    std::string_view source_uri = {});
AudioBuffer Enhance(const AudioBuffer& input, const EnhancerSpec& spec,
                    const StftConfig& stft = {}, std::string_view source_uri = {});

/// Noise gate in the STFT domain. The per-bin noise floor is the 10th
/// percentile of that bin's magnitude over time; coefficients below
/// floor + gate_threshold_db are scaled by -attenuation_db. The input is padded
/// so every sample has full overlap-add coverage, then trimmed back.
/// Buffers shorter than one window are returned unchanged.
AudioBuffer SpectralGateEnhance(const AudioBuffer& input, double gate_threshold_db,
                                double attenuation_db, const StftConfig& cfg);

AudioBuffer ExternalEnhance(const AudioBuffer& input, const ExternalCommand& cmd,
                            std::string_view source_uri);

}  // namespace speechcur

#endif  // SPEECHCUR_ENHANCE_H_
