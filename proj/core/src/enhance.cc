// enhance.cc

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
#include <cstdio>
#include <string>
#include <utility>

#include <spdlog/spdlog.h>

#include "fft.h"
#include "speechcur/enhance.h"
#include "stats.h"

namespace speechcur {

namespace {

std::string FormatNumber(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

class IdentityEnhancer final : public Enhancer {
 public:
  AudioBuffer Process(const AudioBuffer& input, std::string_view) const override {
    return input;
  }
  std::string Id() const override { return "identity"; }
};

class SpectralGateEnhancer final : public Enhancer {
 public:
  SpectralGateEnhancer(const EnhancerSpec& spec, const StftConfig& stft)
      : threshold_db_(spec.gate_threshold_db),
        attenuation_db_(spec.attenuation_db),
        stft_(stft),
        id_(spec.Id()) {}
  AudioBuffer Process(const AudioBuffer& input, std::string_view) const override {
    return SpectralGateEnhance(input, threshold_db_, attenuation_db_, stft_);
  }
  std::string Id() const override { return id_; }

 private:
  double threshold_db_;
  double attenuation_db_;
  StftConfig stft_;
  std::string id_;
};

class OracleEnhancer final : public Enhancer {
 public:
  OracleEnhancer(ReferenceResolver resolver, std::string id)
      : resolver_(std::move(resolver)), id_(std::move(id)) {}
  AudioBuffer Process(const AudioBuffer&, std::string_view uri) const override {
    return resolver_(uri);
  }
  std::string Id() const override { return id_; }

 private:
  ReferenceResolver resolver_;
  std::string id_;
};

class ExternalEnhancer final : public Enhancer {
 public:
  explicit ExternalEnhancer(const EnhancerSpec& spec)
      : cmd_(spec.external), id_(spec.Id()) {}
  AudioBuffer Process(const AudioBuffer& input, std::string_view uri) const override {
    return ExternalEnhance(input, cmd_, uri);
  }
  std::string Id() const override { return id_; }

 private:
  ExternalCommand cmd_;
  std::string id_;
};

}  // namespace

std::string_view EnhancerKindName(EnhancerKind kind) {
  switch (kind) {
    case EnhancerKind::kIdentity:
      return "identity";
    case EnhancerKind::kSpectralGate:
      return "spectral_gate";
    case EnhancerKind::kOracle:
      return "oracle";
    case EnhancerKind::kExternal:
      return "external";
  }
  return "unknown";
}

EnhancerKind ParseEnhancerKind(std::string_view name) {
  if (name == "identity") return EnhancerKind::kIdentity;
  if (name == "spectral_gate") return EnhancerKind::kSpectralGate;
  if (name == "oracle") return EnhancerKind::kOracle;
  if (name == "external") return EnhancerKind::kExternal;
  throw ConfigError("enhancer.kind", "unknown enhancer kind '" + std::string(name) + "'");
}

void EnhancerSpec::Validate() const {
  switch (kind) {
    case EnhancerKind::kIdentity:
      break;
    case EnhancerKind::kSpectralGate:
      if (!std::isfinite(gate_threshold_db)) {
        throw ConfigError("enhancer.gate_threshold_db", "must be finite");
      }
      if (!(attenuation_db >= 0.0) || !std::isfinite(attenuation_db)) {
        throw ConfigError("enhancer.attenuation_db", "must be finite and >= 0");
      }
      break;
    case EnhancerKind::kOracle:
      if (reference_dir.empty()) {
        throw ConfigError("enhancer.reference_dir", "required for the oracle enhancer");
      }
      break;
    case EnhancerKind::kExternal:
      external.Validate("enhancer");
      break;
  }
}

std::string EnhancerSpec::Id() const {
  if (!label.empty()) return label;
  switch (kind) {
    case EnhancerKind::kIdentity:
      return "identity";
    case EnhancerKind::kSpectralGate:
      return "spectral_gate(threshold_db=" + FormatNumber(gate_threshold_db) +
             ",attenuation_db=" + FormatNumber(attenuation_db) + ")";
    case EnhancerKind::kOracle:
      return "oracle(" + reference_dir.string() + ")";
    case EnhancerKind::kExternal:
      return "external(" + external.command_template + ")";
  }
  return "unknown";
}

std::unique_ptr<Enhancer> MakeEnhancer(const EnhancerSpec& spec,
                                       const StftConfig& stft) {
  spec.Validate();
  switch (spec.kind) {
    case EnhancerKind::kIdentity:
      return std::make_unique<IdentityEnhancer>();
    case EnhancerKind::kSpectralGate:
      stft.Validate();
      return std::make_unique<SpectralGateEnhancer>(spec, stft);
    case EnhancerKind::kOracle: {
      const std::filesystem::path dir = spec.reference_dir;
      return MakeOracleEnhancer(
          [dir](std::string_view uri) {
            return ReadWav(dir / std::filesystem::path(uri).filename());
          },
          spec.Id());
    }
    case EnhancerKind::kExternal:
      return std::make_unique<ExternalEnhancer>(spec);
  }
  throw ConfigError("enhancer.kind", "unhandled enhancer kind");
}

std::unique_ptr<Enhancer> MakeOracleEnhancer(ReferenceResolver resolver,
                                             std::string id) {
  return std::make_unique<OracleEnhancer>(std::move(resolver), std::move(id));
}

AudioBuffer Enhance(const Enhancer& enhancer, const AudioBuffer& input,
                    std::string_view source_uri) {
  AudioBuffer out = enhancer.Process(input, source_uri);
  if (out.size() != input.size() || out.sample_rate != input.sample_rate) {
    throw ContractError("enhancer " + enhancer.Id() + " returned " +
                        std::to_string(out.size()) + " samples at " +
                        std::to_string(out.sample_rate) + " Hz for an input of " +
                        std::to_string(input.size()) + " samples at " +
                        std::to_string(input.sample_rate) + " Hz");
  }
  return out;
}

AudioBuffer Enhance(const AudioBuffer& input, const EnhancerSpec& spec,
                    const StftConfig& stft, std::string_view source_uri) {
  return Enhance(*MakeEnhancer(spec, stft), input, source_uri);
}

AudioBuffer SpectralGateEnhance(const AudioBuffer& input, double gate_threshold_db,
                                double attenuation_db, const StftConfig& cfg) {
  if (attenuation_db < 0.0) {
    throw ContractError("spectral gate attenuation must be >= 0 dB");
  }
  const std::size_t n = cfg.window_len;
  const std::size_t hop = cfg.hop;
  const std::size_t len = input.size();
  if (len < n) {
    spdlog::warn("spectral gate: input of {} samples is shorter than one window ({}); "
                 "returned unchanged", len, n);
    return input;
  }

  // Pad so that every input sample is covered by the full set of overlapping
  // frames; the first frame starts n - hop samples before the input.
  // The last frame starts at the final hop-aligned position at or before the
  // last input sample.
  const std::size_t front = n - hop;
  const std::size_t steps = (front + len - 1) / hop + 1;
  const std::size_t padded = (steps - 1) * hop + n;
  const std::size_t bins = cfg.bins();

  const std::vector<double> window = cfg.Window();
  auto sample_at = [&](std::size_t p) -> double {
    return (p >= front && p < front + len) ? input.samples[p - front] : 0.0;
  };

  internal::RealFft fft(n);
  std::vector<double> frame(n);
  std::vector<std::complex<double>> coeffs(bins);
  auto analyze = [&](std::size_t t) {
    const std::size_t offset = t * hop;
    for (std::size_t i = 0; i < n; ++i) frame[i] = window[i] * sample_at(offset + i);
    fft.Forward(frame, coeffs);
  };

  // Pass 1: per-bin magnitude history for the noise floor.
  std::vector<float> magnitudes(bins * steps);
  for (std::size_t t = 0; t < steps; ++t) {
    analyze(t);
    for (std::size_t k = 0; k < bins; ++k) {
      magnitudes[k * steps + t] = static_cast<float>(std::abs(coeffs[k]));
    }
  }
  const double threshold_gain = std::pow(10.0, gate_threshold_db / 20.0);
  std::vector<double> threshold(bins);
  std::vector<float> history(steps);
  for (std::size_t k = 0; k < bins; ++k) {
    std::copy_n(magnitudes.begin() + static_cast<std::ptrdiff_t>(k * steps), steps,
                history.begin());
    threshold[k] = internal::Percentile(history, 0.10) * threshold_gain;
  }

  // Pass 2: gate and overlap-add.
  const double attenuation = std::pow(10.0, -attenuation_db / 20.0);
  std::vector<double> acc(padded, 0.0);
  std::vector<double> norm(padded, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    analyze(t);
    for (std::size_t k = 0; k < bins; ++k) {
      if (magnitudes[k * steps + t] < threshold[k]) coeffs[k] *= attenuation;
    }
    fft.Inverse(coeffs, frame);
    const std::size_t offset = t * hop;
    for (std::size_t i = 0; i < n; ++i) {
      acc[offset + i] += window[i] * frame[i];
      norm[offset + i] += window[i] * window[i];
    }
  }

  AudioBuffer out;
  out.sample_rate = input.sample_rate;
  out.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t p = front + i;
    out.samples[i] = static_cast<float>(acc[p] / norm[p]);
  }
  return out;
}

AudioBuffer ExternalEnhance(const AudioBuffer& input, const ExternalCommand& cmd,
                            std::string_view source_uri) {
  return RunAudioExchange(input, cmd, source_uri, "enhance");
}

}  // namespace speechcur
