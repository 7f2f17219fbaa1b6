// report.cc

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
#include <sstream>

#include "json.hpp"
#include "speechcur/manifest.h"
#include "speechcur/report.h"

namespace speechcur {

using nlohmann::json;

void RhoHistogram::Add(double rho) {
  if (rho <= kRhoSentinel || !std::isfinite(rho)) {
    ++sentinel;
    return;
  }
  ++bins[static_cast<std::int64_t>(std::floor(rho / bin_width))];
}

std::uint64_t RhoHistogram::total() const {
  std::uint64_t sum = sentinel;
  for (const auto& [index, count] : bins) sum += count;
  return sum;
}

std::uint64_t RhoHistogram::CountAtLeast(double threshold) const {
  std::uint64_t sum = 0;
  for (const auto& [index, count] : bins) {
    if (BinStart(index) >= threshold) sum += count;
  }
  return sum;
}

std::uint64_t RhoHistogram::CountBelow(double threshold) const {
  std::uint64_t sum = 0;
  for (const auto& [index, count] : bins) {
    if (BinStart(index + 1) <= threshold) sum += count;
  }
  return sum;
}

std::map<int, RhoHistogram> RhoHistogramByRound(std::span<const CuratedSegment> segs,
                                                double bin_width) {
  std::map<int, RhoHistogram> out;
  for (const CuratedSegment& seg : segs) {
    auto [it, inserted] = out.try_emplace(seg.round_id);
    it->second.bin_width = bin_width;
    for (double rho : seg.frame_rho) it->second.Add(rho);
  }
  return out;
}

std::map<int, double> AcceptedHoursByRound(std::span<const CuratedSegment> segs) {
  // Exact integer sample totals per (round, rate) before dividing.
  std::map<int, std::map<int, std::int64_t>> samples;
  for (const CuratedSegment& seg : segs) {
    samples[seg.round_id][seg.sample_rate] += seg.end_sample - seg.start_sample;
  }
  std::map<int, double> out;
  for (const auto& [round, by_rate] : samples) {
    double seconds = 0.0;
    for (const auto& [rate, count] : by_rate) {
      seconds += static_cast<double>(count) / static_cast<double>(rate);
    }
    out[round] = seconds / 3600.0;
  }
  return out;
}

ManifestSummary SummarizeSegments(std::span<const CuratedSegment> segs,
                                  double bin_width) {
  ManifestSummary out;
  out.histograms = RhoHistogramByRound(segs, bin_width);
  out.hours = AcceptedHoursByRound(segs);
  for (const CuratedSegment& seg : segs) ++out.segments[seg.round_id];
  return out;
}

ManifestSummary SummarizeManifests(std::span<const std::filesystem::path> manifests,
                                   double bin_width) {
  std::vector<CuratedSegment> all;
  std::size_t malformed = 0;
  for (const auto& path : manifests) {
    ManifestContents contents = ReadManifest(path);
    malformed += contents.malformed;
    std::move(contents.segments.begin(), contents.segments.end(), std::back_inserter(all));
  }
  ManifestSummary out = SummarizeSegments(all, bin_width);
  out.malformed = malformed;
  return out;
}

std::string SummaryToJson(const ManifestSummary& summary) {
  json rounds = json::array();
  for (const auto& [round, hours] : summary.hours) {
    json bins = json::array();
    const RhoHistogram& h = summary.histograms.at(round);
    for (const auto& [index, count] : h.bins) {
      bins.push_back({{"start_db", h.BinStart(index)},
                      {"end_db", h.BinStart(index + 1)},
                      {"count", count}});
    }
    rounds.push_back({{"round_id", round},
                      {"segments", summary.segments.at(round)},
                      {"accepted_hours", hours},
                      {"rho_histogram",
                       {{"bin_width_db", h.bin_width},
                        {"bins", bins},
                        {"sentinel", h.sentinel},
                        {"total", h.total()}}}});
  }
  return json{{"rounds", rounds}, {"malformed_records", summary.malformed}}.dump(2);
}

std::string HoursCsv(const ManifestSummary& summary) {
  std::ostringstream out;
  out.precision(17);
  out << "round_id,segments,hours\n";
  for (const auto& [round, hours] : summary.hours) {
    out << round << ',' << summary.segments.at(round) << ',' << hours << '\n';
  }
  return out.str();
}

std::string RhoHistogramCsv(const ManifestSummary& summary) {
  std::ostringstream out;
  out << "round_id,bin_start_db,bin_end_db,count\n";
  for (const auto& [round, h] : summary.histograms) {
    for (const auto& [index, count] : h.bins) {
      out << round << ',' << h.BinStart(index) << ',' << h.BinStart(index + 1) << ','
          << count << '\n';
    }
    if (h.sentinel > 0) out << round << ",,," << h.sentinel << '\n';
  }
  return out.str();
}

}  // namespace speechcur
