// speechcur/synth.h

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

#ifndef SPEECHCUR_SYNTH_H_
#define SPEECHCUR_SYNTH_H_

#include <cstdint>
#include <random>
#include <string_view>

#include "speechcur/audio.h"

namespace speechcur {

/// Deterministic speech-like test signal: a harmonic series whose F0 wanders
/// between 90 and 250 Hz, plus high-passed breath noise, gated into syllables
/// of 250-500 ms separated by 50-150 ms of digital silence. Harmonics fade
/// out between 0.93 and 0.97 of Nyquist; the breath noise is full band.
/// Peak level is -6 dBFS.
AudioBuffer SynthSpeechProxy(double seconds, int sample_rate, std::uint64_t seed);

enum class NoiseKind { kWhite, kPink, kBabble };

std::string_view NoiseKindName(NoiseKind kind);
NoiseKind ParseNoiseKind(std::string_view name);

/// Unit-RMS noise of the given colour. Babble is a sum of speech proxies.
AudioBuffer GenerateNoise(NoiseKind kind, std::size_t samples, int sample_rate,
                          std::uint64_t seed);

/// What the Rayleigh draw measures.
enum class RayleighScale {
  /// The draw is the target SNR in dB.
  kSnrDb,
  /// The draw is the noise-to-speech RMS amplitude ratio; SNR = -20 log10(draw).
  kNoiseAmplitude,
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kWhite;
  double rayleigh_sigma = 15.0;
  RayleighScale scale = RayleighScale::kSnrDb;
  double min_snr_db = 0.0;
  double max_snr_db = 60.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// Rayleigh-distributed SNR draws, reproducible from the seed.
class RayleighSnrSampler {
 public:
  RayleighSnrSampler(const NoiseSpec& spec, std::uint64_t seed);

  /// Unclipped Rayleigh(sigma) variate.
  double DrawRaw();
  /// Target SNR in dB for one draw, clipped to [min_snr_db, max_snr_db].
  double DrawSnrDb();
  double ToSnrDb(double raw) const;

 private:
  NoiseSpec spec_;
  std::mt19937_64 rng_;
};

struct NoisyMix {
  AudioBuffer noisy;
  double target_snr_db = 0.0;
};

/// clean + g * noise, with g chosen so RMSdB(clean) - RMSdB(g * noise) equals
/// snr_db. Throws ContractError for silent speech or mismatched lengths.
NoisyMix MixAtSnr(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db);

/// Draws a target SNR and mixes freshly generated noise at that level.
NoisyMix InjectNoise(const AudioBuffer& clean, const NoiseSpec& spec);

}  // namespace speechcur

#endif  // SPEECHCUR_SYNTH_H_
