// tests/unit/vad_test.cc

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
#include <random>

#include <gtest/gtest.h>

#include "speechcur/vad.h"
#include "test_support.h"

namespace speechcur {
namespace {

constexpr int kRate = 48000;

// Hand-written energy rule: sort, interpolate the 10th percentile, compare.
std::vector<std::uint8_t> ReferenceWindows(const AudioBuffer& b, std::size_t win,
                                           double rel_db, double abs_db) {
  std::vector<double> level;
  for (std::size_t s = 0; s < b.size(); s += win) {
    const std::size_t e = std::min(b.size(), s + win);
    long double sum = 0;
    for (std::size_t i = s; i < e; ++i) sum += static_cast<long double>(b.samples[i]) * b.samples[i];
    const double rms = std::sqrt(static_cast<double>(sum / (e - s)));
    level.push_back(20.0 * std::log10(std::max(rms, 1e-10)));
  }
  std::vector<double> sorted = level;
  std::sort(sorted.begin(), sorted.end());
  const double pos = 0.1 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double floor = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  const double threshold = std::max(floor + rel_db, abs_db);
  std::vector<std::uint8_t> out;
  for (double l : level) out.push_back(l >= threshold);
  return out;
}

AudioBuffer AtLevel(std::size_t n, double dbfs, std::uint64_t seed) {
  return testing::Gaussian(n, kRate, std::pow(10.0, dbfs / 20.0), seed);
}

TEST(Vad, SilenceIsNonSpeech) {
  const SpeechMask m = DetectSpeech(testing::Constant(kRate, kRate, 0.0f), VadSpec{});
  EXPECT_EQ(m.size(), static_cast<std::size_t>(kRate));
  EXPECT_TRUE(std::all_of(m.decisions.begin(), m.decisions.end(), [](auto v) { return v == 0; }));
}

TEST(Vad, AlwaysOn) {
  VadSpec spec;
  spec.kind = VadKind::kAlwaysOn;
  const SpeechMask m = DetectSpeech(testing::Constant(777, kRate, 0.0f), spec);
  EXPECT_EQ(m.size(), 777u);
  EXPECT_TRUE(std::all_of(m.decisions.begin(), m.decisions.end(), [](auto v) { return v == 1; }));
}

TEST(Vad, ToneThenNearSilence) {
  AudioBuffer b = testing::Sine(2 * kRate, kRate, 440.0, std::pow(10.0, -6.0 / 20.0));
  for (std::size_t i = kRate; i < b.size(); ++i) b.samples[i] *= std::pow(10.0f, -74.0f / 20.0f);
  const SpeechMask m = DetectSpeech(b, VadSpec{});
  const auto expected = ReferenceWindows(b, 960, 15.0, -60.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    ASSERT_EQ(m.decisions[i], i < static_cast<std::size_t>(kRate) ? 1 : 0) << i;
    ASSERT_EQ(m.decisions[i], expected[i / 960]);
  }
}

TEST(Vad, ConstantLevelHasNoSpeech) {
  // floor = -20, threshold = -5: nothing passes.
  const AudioBuffer b = testing::Constant(kRate, kRate, 0.1f);
  const auto w = EnergyVadWindows(b, VadSpec{});
  EXPECT_EQ(w.size(), 50u);
  EXPECT_TRUE(std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; }));
}

TEST(Vad, AlternatingSeconds) {
  AudioBuffer b{{}, kRate};
  for (int s = 0; s < 6; ++s) {
    const AudioBuffer part = testing::Constant(kRate, kRate,
                                               static_cast<float>(std::pow(10.0, (s % 2 ? -70.0 : -10.0) / 20.0)));
    b.samples.insert(b.samples.end(), part.samples.begin(), part.samples.end());
  }
  const auto w = EnergyVadWindows(b, VadSpec{});
  ASSERT_EQ(w.size(), 300u);
  for (std::size_t i = 0; i < w.size(); ++i) ASSERT_EQ(w[i], (i / 50) % 2 == 0 ? 1 : 0) << i;
}

TEST(Vad, ShortBufferIsOneWindow) {
  const AudioBuffer b = AtLevel(100, -20, 3);
  const auto w = EnergyVadWindows(b, VadSpec{});
  ASSERT_EQ(w.size(), 1u);
  // A single window is its own floor, so it never clears floor + 15 dB.
  EXPECT_EQ(w[0], 0);
  EXPECT_EQ(DetectSpeech(b, VadSpec{}).size(), 100u);
}

TEST(Vad, MatchesReferenceOnRandomSignals) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> level(-90.0, 0.0);
  for (int trial = 0; trial < 40; ++trial) {
    AudioBuffer b{{}, kRate};
    const int pieces = 1 + static_cast<int>(rng() % 12);
    for (int p = 0; p < pieces; ++p) {
      const AudioBuffer part = AtLevel(1 + rng() % 20000, level(rng), rng());
      b.samples.insert(b.samples.end(), part.samples.begin(), part.samples.end());
    }
    VadSpec spec;
    spec.relative_threshold_db = 5.0 + static_cast<double>(rng() % 20);
    const auto got = EnergyVadWindows(b, spec);
    const auto want = ReferenceWindows(b, spec.WindowSamples(kRate), spec.relative_threshold_db,
                                       spec.absolute_floor_db);
    ASSERT_EQ(got, want) << trial;
    // Mask length and per-window constancy.
    const SpeechMask m = DetectSpeech(b, spec);
    ASSERT_EQ(m.size(), b.size());
    const std::size_t win = spec.WindowSamples(kRate);
    for (std::size_t i = 0; i < m.size(); ++i) ASSERT_EQ(m.decisions[i], got[i / win]);
  }
}

TEST(Vad, AmplifyingAWindowNeverRemovesSpeech) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    AudioBuffer b = AtLevel(50 * 960, -40, rng());
    for (std::size_t w = 0; w < 50; w += 3) {
      for (std::size_t i = w * 960; i < (w + 1) * 960; ++i) b.samples[i] *= 100.0f;
    }
    const auto before = EnergyVadWindows(b, VadSpec{});
    // Amplify one window that is not among the quietest 10%: the floor is unchanged.
    const std::size_t w = 3 * (1 + rng() % 15);
    AudioBuffer louder = b;
    for (std::size_t i = w * 960; i < (w + 1) * 960; ++i) louder.samples[i] *= 1.5f;
    const auto after = EnergyVadWindows(louder, VadSpec{});
    if (before[w] == 1) ASSERT_EQ(after[w], 1);
  }
}

TEST(VadSpec, Validation) {
  VadSpec spec;
  EXPECT_EQ(spec.WindowSamples(kRate), 960u);
  EXPECT_EQ(spec.WindowSamples(44100), 882u);
  spec.window_seconds = 0.0;
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec.window_seconds = 1e-6;
  EXPECT_THROW(spec.WindowSamples(8000), ConfigError);
  EXPECT_EQ(ParseVadKind("always_on"), VadKind::kAlwaysOn);
  EXPECT_THROW(ParseVadKind("neural"), ConfigError);
}

TEST(Vad, ExternalThresholdsAtOneHalf) {
  VadSpec spec;
  spec.kind = VadKind::kExternal;
  spec.external.command_template = "cp {input} {output}";
  AudioBuffer b{{0.0f, 0.49f, 0.5f, 0.9f, -1.0f}, kRate};
  const SpeechMask m = DetectSpeech(b, spec, "x.wav");
  EXPECT_EQ(m.decisions, (std::vector<std::uint8_t>{0, 0, 1, 1, 0}));
}

}  // namespace
}  // namespace speechcur
