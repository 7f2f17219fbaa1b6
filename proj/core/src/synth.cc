// synth.cc

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
#include <vector>

#include "speechcur/dsp.h"
#include "speechcur/synth.h"

namespace speechcur {

namespace {

constexpr double kPeakDbfs = -6.0;
// Breath noise standard deviation relative to the harmonic series' scale.
constexpr double kBreathLevel = 0.05;
constexpr double kRampSeconds = 0.03;

// Spectral envelope of the harmonic series, tabulated at 1 Hz.
std::vector<double> HarmonicEnvelope(int sample_rate) {
  const double nyquist = sample_rate / 2.0;
  const double fade_start = 0.93 * nyquist;
  const double fade_end = 0.97 * nyquist;
  std::vector<double> table(static_cast<std::size_t>(nyquist) + 2, 0.0);
  for (std::size_t f = 0; f < table.size(); ++f) {
    const double hz = static_cast<double>(f);
    double taper = 1.0;
    if (hz >= fade_end) {
      taper = 0.0;
    } else if (hz > fade_start) {
      taper = 0.5 + 0.5 * std::cos(std::numbers::pi * (hz - fade_start) /
                                   (fade_end - fade_start));
    }
    table[f] = taper / std::sqrt(1.0 + hz / 300.0);
  }
  return table;
}

void NormalizeRms(AudioBuffer* buf) {
  double sum = 0.0;
  for (float v : buf->samples) sum += static_cast<double>(v) * v;
  const double rms = std::sqrt(sum / std::max<std::size_t>(1, buf->size()));
  if (rms <= 0.0) return;
  for (float& v : buf->samples) v = static_cast<float>(v / rms);
}

}  // namespace

AudioBuffer SynthSpeechProxy(double seconds, int sample_rate, std::uint64_t seed) {
  if (!(seconds > 0.0)) throw ContractError("speech proxy duration must be positive");
  if (sample_rate <= 0) throw ContractError("speech proxy sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double fs = sample_rate;

  // Syllable envelope: voiced spans with raised-cosine ramps, silent gaps.
  std::vector<double> envelope(n, 0.0);
  const auto ramp = static_cast<std::size_t>(kRampSeconds * fs);
  for (std::size_t pos = 0; pos < n;) {
    const auto voiced = static_cast<std::size_t>((0.25 + 0.25 * uniform(rng)) * fs);
    const auto gap = static_cast<std::size_t>((0.05 + 0.10 * uniform(rng)) * fs);
    const double gain = 0.6 + 0.4 * uniform(rng);
    for (std::size_t i = 0; i < voiced && pos + i < n; ++i) {
      double shape = 1.0;
      if (i < ramp) {
        shape = 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) / ramp);
      } else if (voiced - i <= ramp) {
        shape = 0.5 - 0.5 * std::cos(std::numbers::pi *
                                     static_cast<double>(voiced - i) / ramp);
      }
      envelope[pos + i] = gain * shape;
    }
    pos += voiced + gap;
  }

  // F0 contour in [90, 250] Hz from two slow sinusoids.
  const double phase_a = 2.0 * std::numbers::pi * uniform(rng);
  const double phase_b = 2.0 * std::numbers::pi * uniform(rng);
  const double rate_a = 0.2 + 0.2 * uniform(rng);
  const double rate_b = 0.8 + 0.6 * uniform(rng);
  const std::vector<double> table = HarmonicEnvelope(sample_rate);
  const double max_hz = static_cast<double>(table.size() - 2);
  // Fixed random phase per harmonic keeps the crest factor speech-like.
  const auto max_harmonics = static_cast<std::size_t>(max_hz / 90.0) + 1;
  std::vector<double> cos_theta(max_harmonics + 1), sin_theta(max_harmonics + 1);
  for (std::size_t k = 0; k <= max_harmonics; ++k) {
    const double theta = 2.0 * std::numbers::pi * uniform(rng);
    cos_theta[k] = std::cos(theta);
    sin_theta[k] = std::sin(theta);
  }

  // High-passed breath noise (one-pole, 1 kHz corner).
  const double rc = 1.0 / (2.0 * std::numbers::pi * 1000.0);
  const double hp = rc / (rc + 1.0 / fs);
  double hp_prev_in = 0.0, hp_prev_out = 0.0;

  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.assign(n, 0.0f);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double f0 = 170.0 + 80.0 * (0.6 * std::sin(2.0 * std::numbers::pi * rate_a * t + phase_a) +
                                      0.4 * std::sin(2.0 * std::numbers::pi * rate_b * t + phase_b));
    phase = std::fmod(phase + 2.0 * std::numbers::pi * f0 / fs, 2.0 * std::numbers::pi);

    const double white = gauss(rng);
    const double breath = hp * (hp_prev_out + white - hp_prev_in);
    hp_prev_in = white;
    hp_prev_out = breath;

    if (envelope[i] == 0.0) continue;
    // cos(k * phase) and sin(k * phase) by the Chebyshev recurrence.
    const double c1 = std::cos(phase);
    const double s1 = std::sin(phase);
    double c_prev = 1.0, c_cur = c1, s_prev = 0.0, s_cur = s1, voiced = 0.0;
    for (std::size_t k = 1; k <= max_harmonics; ++k) {
      const double hz = static_cast<double>(k) * f0;
      if (hz >= max_hz) break;
      voiced += table[static_cast<std::size_t>(hz)] *
                (c_cur * cos_theta[k] - s_cur * sin_theta[k]);
      const double c_next = 2.0 * c1 * c_cur - c_prev;
      const double s_next = 2.0 * c1 * s_cur - s_prev;
      c_prev = c_cur;
      c_cur = c_next;
      s_prev = s_cur;
      s_cur = s_next;
    }
    out.samples[i] = static_cast<float>(envelope[i] * (0.1 * voiced + kBreathLevel * breath));
  }

  float peak = 0.0f;
  for (float v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0f) {
    const double scale = std::pow(10.0, kPeakDbfs / 20.0) / peak;
    for (float& v : out.samples) v = static_cast<float>(v * scale);
  }
  return out;
}

std::string_view NoiseKindName(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite:
      return "white";
    case NoiseKind::kPink:
      return "pink";
    case NoiseKind::kBabble:
      return "babble_proxy";
  }
  return "unknown";
}

NoiseKind ParseNoiseKind(std::string_view name) {
  if (name == "white") return NoiseKind::kWhite;
  if (name == "pink") return NoiseKind::kPink;
  if (name == "babble_proxy" || name == "babble") return NoiseKind::kBabble;
  throw ConfigError("noise_kind", "unknown noise kind '" + std::string(name) + "'");
}

AudioBuffer GenerateNoise(NoiseKind kind, std::size_t samples, int sample_rate,
                          std::uint64_t seed) {
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.assign(samples, 0.0f);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  switch (kind) {
    case NoiseKind::kWhite:
      for (float& v : out.samples) v = static_cast<float>(gauss(rng));
      break;
    case NoiseKind::kPink: {
      // Paul Kellet's refined pink filter.
      double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
      for (float& v : out.samples) {
        const double w = gauss(rng);
        b0 = 0.99886 * b0 + w * 0.0555179;
        b1 = 0.99332 * b1 + w * 0.0750759;
        b2 = 0.96900 * b2 + w * 0.1538520;
        b3 = 0.86650 * b3 + w * 0.3104856;
        b4 = 0.55000 * b4 + w * 0.5329522;
        b5 = -0.7616 * b5 - w * 0.0168980;
        v = static_cast<float>(b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362);
        b6 = w * 0.115926;
      }
      break;
    }
    case NoiseKind::kBabble: {
      constexpr int kTalkers = 5;
      const double seconds = static_cast<double>(samples) / sample_rate;
      for (int talker = 0; talker < kTalkers; ++talker) {
        const AudioBuffer voice =
            SynthSpeechProxy(seconds, sample_rate, seed * 7919 + talker + 1);
        const std::size_t shift = samples == 0 ? 0 : rng() % samples;
        for (std::size_t i = 0; i < samples; ++i) {
          out.samples[i] += voice.samples[(i + shift) % samples];
        }
      }
      break;
    }
  }
  NormalizeRms(&out);
  return out;
}

void NoiseSpec::Validate() const {
  if (!(rayleigh_sigma > 0.0)) throw ConfigError("rayleigh_sigma", "must be positive");
  if (!(min_snr_db < max_snr_db)) {
    throw ConfigError("snr_clip", "min_db must be below max_db");
  }
}

RayleighSnrSampler::RayleighSnrSampler(const NoiseSpec& spec, std::uint64_t seed)
    : spec_(spec), rng_(seed) {
  spec_.Validate();
}

double RayleighSnrSampler::DrawRaw() {
  // Inverse CDF; 1 - u keeps the argument of the log in (0, 1].
  const double u = std::generate_canonical<double, 53>(rng_);
  return spec_.rayleigh_sigma * std::sqrt(-2.0 * std::log(1.0 - u));
}

double RayleighSnrSampler::ToSnrDb(double raw) const {
  const double snr = spec_.scale == RayleighScale::kSnrDb
                         ? raw
                         : -20.0 * std::log10(std::max(raw, 1e-12));
  return std::clamp(snr, spec_.min_snr_db, spec_.max_snr_db);
}

double RayleighSnrSampler::DrawSnrDb() { return ToSnrDb(DrawRaw()); }

NoisyMix MixAtSnr(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db) {
  if (clean.size() != noise.size() || clean.sample_rate != noise.sample_rate) {
    throw ContractError("speech and noise differ in length or sample rate");
  }
  if (clean.empty()) throw ContractError("cannot mix noise into an empty buffer");
  const double clean_db = RmsDb(clean.view());
  const double noise_db = RmsDb(noise.view());
  if (clean_db <= kRmsFloorDb) throw ContractError("SNR is undefined for digital silence");
  if (noise_db <= kRmsFloorDb) throw ContractError("noise is digital silence");
  const double gain = std::pow(10.0, (clean_db - snr_db - noise_db) / 20.0);
  NoisyMix mix;
  mix.target_snr_db = snr_db;
  mix.noisy.sample_rate = clean.sample_rate;
  mix.noisy.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    mix.noisy.samples[i] = static_cast<float>(clean.samples[i] + gain * noise.samples[i]);
  }
  return mix;
}

NoisyMix InjectNoise(const AudioBuffer& clean, const NoiseSpec& spec) {
  RayleighSnrSampler sampler(spec, spec.seed);
  const double snr = sampler.DrawSnrDb();
  const AudioBuffer noise = GenerateNoise(spec.kind, clean.size(), clean.sample_rate,
                                          spec.seed ^ 0x9E3779B97F4A7C15ull);
  return MixAtSnr(clean, noise, snr);
}

}  // namespace speechcur
