// tests/unit/enhance_test.cc

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
#include <numbers>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "speechcur/dsp.h"
#include "speechcur/enhance.h"
#include "speechcur/synth.h"
#include "test_support.h"

namespace speechcur {
namespace {

constexpr int kRate = 48000;

EnhancerSpec Gate(double threshold_db, double attenuation_db) {
  EnhancerSpec s;
  s.kind = EnhancerKind::kSpectralGate;
  s.gate_threshold_db = threshold_db;
  s.attenuation_db = attenuation_db;
  return s;
}

TEST(Enhance, IdentityIsBitExact) {
  const AudioBuffer x = testing::Gaussian(12345, kRate, 0.1, 1);
  const AudioBuffer y = Enhance(x, EnhancerSpec{});
  EXPECT_EQ(y.samples, x.samples);
  EXPECT_EQ(y.sample_rate, x.sample_rate);
}

TEST(Enhance, OracleReturnsReference) {
  const AudioBuffer clean = SynthSpeechProxy(2.0, kRate, 4);
  const AudioBuffer noise = GenerateNoise(NoiseKind::kPink, clean.size(), kRate, 5);
  const AudioBuffer noisy = MixAtSnr(clean, noise, 10.0).noisy;
  const auto oracle = MakeOracleEnhancer([&](std::string_view) { return clean; });
  EXPECT_EQ(Enhance(*oracle, noisy, "a.wav").samples, clean.samples);
}

TEST(Enhance, OracleFromDirectoryMatchesFilename) {
  testing::TempDir dir;
  const AudioBuffer clean = testing::Gaussian(4000, 16000, 0.1, 2);
  WriteWav(dir / "utt.wav", clean);
  EnhancerSpec spec;
  spec.kind = EnhancerKind::kOracle;
  spec.reference_dir = dir.path();
  const AudioBuffer noisy = testing::Gaussian(4000, 16000, 0.2, 3);
  EXPECT_EQ(Enhance(noisy, spec, {}, "/somewhere/else/utt.wav").samples, clean.samples);
  EXPECT_THROW(Enhance(noisy, spec, {}, "/x/other.wav"), IoError);
}

TEST(Enhance, ShapeContractIsEnforced) {
  const AudioBuffer x = testing::Gaussian(1000, kRate, 0.1, 1);
  const auto shorter = MakeOracleEnhancer([&](std::string_view) {
    return AudioBuffer{std::vector<float>(999), kRate};
  });
  EXPECT_THROW(Enhance(*shorter, x), ContractError);
  const auto wrong_rate = MakeOracleEnhancer([&](std::string_view) {
    return AudioBuffer{std::vector<float>(1000), 16000};
  });
  EXPECT_THROW(Enhance(*wrong_rate, x), ContractError);
}

TEST(SpectralGate, SilenceStaysSilent) {
  const AudioBuffer y = SpectralGateEnhance(testing::Constant(kRate, kRate, 0.0f), 20, 40, {});
  for (float v : y.samples) ASSERT_EQ(v, 0.0f);
}

TEST(SpectralGate, ZeroAttenuationIsNoOp) {
  const AudioBuffer x = testing::Gaussian(kRate + 321, kRate, 0.1, 7);
  const AudioBuffer y = SpectralGateEnhance(x, 20, 0, {});
  ASSERT_EQ(y.size(), x.size());
  double err = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    err = std::max(err, std::abs(static_cast<double>(y.samples[i]) - x.samples[i]));
    peak = std::max(peak, std::abs(static_cast<double>(x.samples[i])));
  }
  EXPECT_LT(err / peak, 1e-6);
}

// The floor is a per-bin percentile over time, so a tone that never stops
// would become its own floor; the tone here is on for half the file.
TEST(SpectralGate, KeepsToneRemovesNoise) {
  const StftConfig cfg;
  const std::size_t n = 4 * kRate;
  const std::size_t bin = 200;
  const double hz = static_cast<double>(bin) * kRate / cfg.window_len;
  AudioBuffer x = testing::Gaussian(n, kRate, std::pow(10.0, -60.0 / 20.0), 9);
  for (std::size_t i = kRate; i < 3 * kRate; ++i) {
    x.samples[i] += static_cast<float>(
        0.5 * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / kRate));
  }
  const AudioBuffer y = SpectralGateEnhance(x, 20.0, 40.0, cfg);
  const Spectrogram sx = Stft(x, cfg);
  const Spectrogram sy = Stft(y, cfg);
  // Frames whose support, including synthesis overlap, avoids the tone edges.
  const std::size_t margin = 2 * cfg.window_len;
  double tone_x = 0, tone_y = 0, noise_x = 0, noise_y = 0;
  for (std::size_t t = 0; t < sx.steps(); ++t) {
    const std::size_t s = t * cfg.hop;
    const bool on = s >= kRate + margin && s + margin < 3 * kRate;
    const bool off = s + margin < kRate || s >= 3 * kRate + cfg.window_len;
    if (on) {
      tone_x += std::abs(sx.at(bin, t));
      tone_y += std::abs(sy.at(bin, t));
    }
    if (!on && !off) continue;
    for (std::size_t k = 0; k < sx.bins(); ++k) {
      if (k + 50 > bin && k < bin + 50) continue;
      noise_x += std::norm(sx.at(k, t));
      noise_y += std::norm(sy.at(k, t));
    }
  }
  EXPECT_NEAR(20.0 * std::log10(tone_y / tone_x), 0.0, 1.0);
  EXPECT_LE(10.0 * std::log10(noise_y / noise_x), -30.0);
}

TEST(SpectralGate, ResidualIsMostlyTheHiss) {
  const AudioBuffer speech = SynthSpeechProxy(10.0, kRate, 3);
  const double level = testing::ReferenceRmsDb(speech.view());
  const AudioBuffer hiss = testing::Gaussian(speech.size(), kRate,
                                             std::pow(10.0, (level - 40.0) / 20.0), 4);
  AudioBuffer mix = speech;
  for (std::size_t i = 0; i < mix.size(); ++i) mix.samples[i] += hiss.samples[i];
  const AudioBuffer out = SpectralGateEnhance(mix, 20.0, 40.0, {});
  // Split the residual between digital-silence gaps of the speech and the rest.
  double gap_res = 0, gap_hiss = 0, speech_res = 0;
  std::size_t gap_n = 0, speech_n = 0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const double r = static_cast<double>(mix.samples[i]) - out.samples[i];
    if (speech.samples[i] == 0.0f) {
      gap_res += r * r;
      gap_hiss += static_cast<double>(hiss.samples[i]) * hiss.samples[i];
      ++gap_n;
    } else {
      speech_res += r * r;
      ++speech_n;
    }
  }
  ASSERT_GT(gap_n, 0u);
  // Nearly all of the hiss leaves the gaps ...
  EXPECT_NEAR(10.0 * std::log10(gap_res / gap_hiss), 0.0, 1.0);
  // ... and the residual is denser there than under speech.
  EXPECT_GT(gap_res / gap_n, speech_res / speech_n);
}

TEST(SpectralGate, PreservesLengthForAwkwardSizes) {
  const StftConfig cfg;
  std::mt19937_64 rng(17);
  std::vector<std::size_t> sizes = {0, 1, cfg.window_len - 1, cfg.window_len, cfg.window_len + 1,
                                    cfg.window_len + cfg.hop - 1, 3 * cfg.window_len + 7};
  for (int i = 0; i < 10; ++i) sizes.push_back(rng() % 30000);
  for (std::size_t n : sizes) {
    const AudioBuffer x = testing::Gaussian(n, kRate, 0.1, n);
    const AudioBuffer y = Enhance(x, Gate(20, 30), cfg);
    ASSERT_EQ(y.size(), n);
    if (n < cfg.window_len) EXPECT_EQ(y.samples, x.samples);
  }
}

TEST(SpectralGate, Deterministic) {
  const AudioBuffer x = testing::Gaussian(3 * kRate, kRate, 0.1, 2);
  EXPECT_EQ(SpectralGateEnhance(x, 20, 30, {}).samples, SpectralGateEnhance(x, 20, 30, {}).samples);
}

TEST(SpectralGate, RejectsNegativeAttenuation) {
  EXPECT_THROW(SpectralGateEnhance(testing::Constant(4096, kRate, 0.1f), 20, -1, {}),
               ContractError);
  EXPECT_THROW(Gate(20, -1).Validate(), ConfigError);
}

TEST(EnhancerSpec, IdsAndValidation) {
  EXPECT_EQ(EnhancerSpec{}.Id(), "identity");
  EXPECT_EQ(Gate(20, 40).Id(), "spectral_gate(threshold_db=20,attenuation_db=40)");
  EnhancerSpec labelled = Gate(20, 40);
  labelled.label = "se-round-2";
  EXPECT_EQ(labelled.Id(), "se-round-2");
  EnhancerSpec oracle;
  oracle.kind = EnhancerKind::kOracle;
  EXPECT_THROW(oracle.Validate(), ConfigError);
  EnhancerSpec ext;
  ext.kind = EnhancerKind::kExternal;
  ext.external.command_template = "cp {input} /tmp/x";
  try {
    ext.Validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "enhancer.command");
  }
  EXPECT_EQ(ParseEnhancerKind("spectral_gate"), EnhancerKind::kSpectralGate);
  EXPECT_THROW(ParseEnhancerKind("unet"), ConfigError);
}

ExternalCommand Command(const std::string& tmpl, int timeout_s = 30) {
  ExternalCommand c;
  c.command_template = tmpl;
  c.timeout = std::chrono::seconds(timeout_s);
  return c;
}

TEST(ExternalEnhance, CopyIsBitExact) {
  testing::TempDir dir;
  ExternalCommand c = Command("cp {input} {output}");
  c.exchange_dir = dir.path();
  const AudioBuffer x = testing::Gaussian(5000, kRate, 0.2, 6);
  EXPECT_EQ(ExternalEnhance(x, c, "some/file.wav").samples, x.samples);
  // Exchange files are removed afterwards.
  EXPECT_TRUE(std::filesystem::is_empty(dir.path()));
}

TEST(ExternalEnhance, NonZeroExitCarriesCodeAndDiagnostics) {
  const AudioBuffer x = testing::Gaussian(100, kRate, 0.2, 6);
  try {
    ExternalEnhance(x, Command("echo model exploded >&2; exit 3"), "f.wav");
    FAIL();
  } catch (const ExternalError& e) {
    EXPECT_EQ(e.exit_code(), 3);
    EXPECT_NE(e.diagnostics().find("model exploded"), std::string::npos);
  }
}

TEST(ExternalEnhance, WrongLengthIsContractViolation) {
  const AudioBuffer x = testing::Gaussian(1000, kRate, 0.2, 6);
  // Keep the 44-byte header plus 10 float samples.
  try {
    ExternalEnhance(x, Command("head -c 84 {input} > {output}"), "f.wav");
    FAIL();
  } catch (const ContractError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("1000"), std::string::npos) << what;
    EXPECT_NE(what.find("10"), std::string::npos) << what;
  }
}

TEST(ExternalEnhance, MissingOutputIsExternalError) {
  const AudioBuffer x = testing::Gaussian(100, kRate, 0.2, 6);
  EXPECT_THROW(ExternalEnhance(x, Command("true {input} {output}"), "f.wav"), ExternalError);
}

TEST(ExternalEnhance, TimeoutKillsTheCommand) {
  const AudioBuffer x = testing::Gaussian(100, kRate, 0.2, 6);
  const auto start = std::chrono::steady_clock::now();
  try {
    ExternalEnhance(x, Command("sleep 30; cp {input} {output}", 1), "f.wav");
    FAIL();
  } catch (const ExternalError& e) {
    EXPECT_NE(std::string(e.what()).find("timed out"), std::string::npos);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(ExternalCommand, PlaceholdersAreQuoted) {
  EXPECT_EQ(ShellQuote("it's"), "'it'\\''s'");
  EXPECT_EQ(ExpandPlaceholders("run {input} > {output}", {{"input", "a b.wav"}, {"output", "o.wav"}}),
            "run 'a b.wav' > 'o.wav'");
  const CommandResult r = RunShellCommand("printf hi; exit 4", std::chrono::seconds(5));
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_EQ(r.output, "hi");
  EXPECT_FALSE(r.timed_out);
}

TEST(ExternalEnhance, ConcurrentCallsDoNotCollide) {
  testing::TempDir dir;
  ExternalCommand c = Command("cp {input} {output}");
  c.exchange_dir = dir.path();
  std::vector<AudioBuffer> inputs;
  for (int i = 0; i < 8; ++i) inputs.push_back(testing::Gaussian(2000 + i, kRate, 0.2, i));
  std::vector<AudioBuffer> outputs(inputs.size());
  {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      threads.emplace_back([&, i] { outputs[i] = ExternalEnhance(inputs[i], c, "same.wav"); });
    }
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) EXPECT_EQ(outputs[i].samples, inputs[i].samples);
}

}  // namespace
}  // namespace speechcur
