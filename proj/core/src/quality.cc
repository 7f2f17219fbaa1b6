// quality.cc

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
#include <atomic>
#include <cmath>
#include <sstream>
#include <string>

#include <unistd.h>

#include "speechcur/dsp.h"
#include "speechcur/quality.h"

namespace speechcur {

namespace {

constexpr double kSegSnrMin = -10.0;
constexpr double kSegSnrMax = 35.0;
constexpr double kSegSnrEnergyScreenDb = -60.0;

std::atomic<unsigned long long> g_metric_sequence{0};

}  // namespace

double SegmentalSnr(const AudioBuffer& reference, const AudioBuffer& degraded,
                    double frame_ms) {
  if (reference.size() != degraded.size() ||
      reference.sample_rate != degraded.sample_rate) {
    throw ContractError("segmental SNR inputs differ in length or sample rate");
  }
  const auto frame =
      static_cast<std::size_t>(std::llround(reference.sample_rate * frame_ms / 1000.0));
  if (frame == 0) throw ContractError("segmental SNR frame is shorter than one sample");
  std::size_t frames = reference.size() / frame;
  std::size_t len = frame;
  if (frames == 0 && !reference.empty()) {
    frames = 1;
    len = reference.size();
  }

  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    const auto ref = reference.view().subspan(f * frame, len);
    if (RmsDb(ref) <= kSegSnrEnergyScreenDb) continue;
    double signal = 0.0, error = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const double r = ref[i];
      const double e = r - static_cast<double>(degraded.samples[f * frame + i]);
      signal += r * r;
      error += e * e;
    }
    const double snr = error > 0.0 ? 10.0 * std::log10(signal / error) : kSegSnrMax;
    sum += std::clamp(snr, kSegSnrMin, kSegSnrMax);
    ++used;
  }
  if (used == 0) throw ContractError("segmental SNR: no frame above -60 dBFS in reference");
  return sum / static_cast<double>(used);
}

std::vector<double> FrameTrueSnrDb(const AudioBuffer& clean, const AudioBuffer& noisy,
                                   std::size_t frame_samples) {
  if (clean.size() != noisy.size()) throw ContractError("clean and noisy differ in length");
  std::vector<double> out;
  if (frame_samples == 0) return out;
  std::vector<double> noise(frame_samples);
  for (std::size_t f = 0; f + 1 <= clean.size() / frame_samples; ++f) {
    const std::size_t base = f * frame_samples;
    for (std::size_t i = 0; i < frame_samples; ++i) {
      noise[i] = static_cast<double>(noisy.samples[base + i]) - clean.samples[base + i];
    }
    out.push_back(RmsDb(clean.view().subspan(base, frame_samples)) -
                  RmsDb(std::span<const double>(noise)));
  }
  return out;
}

MetricRegistry MetricRegistry::WithBuiltins() {
  MetricRegistry r;
  r.Register("segmental_snr", [](const AudioBuffer& ref, const AudioBuffer& deg) {
    return SegmentalSnr(ref, deg);
  });
  return r;
}

void MetricRegistry::Register(std::string id, QualityMetric metric) {
  metrics_[std::move(id)] = std::move(metric);
}

bool MetricRegistry::Contains(std::string_view id) const {
  return metrics_.find(id) != metrics_.end();
}

const QualityMetric& MetricRegistry::Get(std::string_view id) const {
  auto it = metrics_.find(id);
  if (it == metrics_.end()) {
    throw ContractError("unknown quality metric '" + std::string(id) + "'");
  }
  return it->second;
}

QualityMetric MakeExternalMetric(ExternalCommand cmd) {
  if (cmd.command_template.find("{reference}") == std::string::npos ||
      cmd.command_template.find("{degraded}") == std::string::npos) {
    throw ConfigError("metric.command", "template must contain {reference} and {degraded}");
  }
  return [cmd](const AudioBuffer& ref, const AudioBuffer& deg) {
    const std::filesystem::path dir =
        cmd.exchange_dir.empty() ? std::filesystem::temp_directory_path() : cmd.exchange_dir;
    std::filesystem::create_directories(dir);
    const std::string stem = "metric_" + std::to_string(getpid()) + "_" +
                             std::to_string(g_metric_sequence.fetch_add(1));
    const auto ref_path = dir / (stem + "_ref.wav");
    const auto deg_path = dir / (stem + "_deg.wav");
    WriteWav(ref_path, ref, SampleFormat::kFloat32);
    WriteWav(deg_path, deg, SampleFormat::kFloat32);
    const CommandResult run = RunShellCommand(
        ExpandPlaceholders(cmd.command_template,
                           {{"reference", ref_path.string()}, {"degraded", deg_path.string()}}),
        std::chrono::duration_cast<std::chrono::milliseconds>(cmd.timeout));
    std::error_code ec;
    std::filesystem::remove(ref_path, ec);
    std::filesystem::remove(deg_path, ec);
    if (run.timed_out) throw ExternalError("external metric timed out", -1, run.output);
    if (run.exit_code != 0) {
      throw ExternalError("external metric exited with code " + std::to_string(run.exit_code),
                          run.exit_code, run.output);
    }
    std::istringstream lines(run.output);
    std::string line, last;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) last = line;
    }
    try {
      std::size_t used = 0;
      const double value = std::stod(last, &used);
      if (last.find_first_not_of(" \t\r", used) != std::string::npos || !std::isfinite(value)) {
        throw std::invalid_argument("");
      }
      return value;
    } catch (const std::exception&) {
      throw ExternalError("external metric printed no score: '" + last + "'", 0, run.output);
    }
  };
}

QualityDelta DeltaQuality(const EvalTriple& triple, std::string_view metric_id,
                          const MetricRegistry& registry) {
  const std::size_t n = triple.clean.size();
  const int rate = triple.clean.sample_rate;
  if (triple.noisy.size() != n || triple.enhanced.size() != n ||
      triple.noisy.sample_rate != rate || triple.enhanced.sample_rate != rate) {
    throw ContractError("evaluation triple differs in length or sample rate");
  }
  const QualityMetric& q = registry.Get(metric_id);
  return QualityDelta{q(triple.clean, triple.enhanced) - q(triple.clean, triple.noisy),
                      std::string(metric_id)};
}

}  // namespace speechcur
