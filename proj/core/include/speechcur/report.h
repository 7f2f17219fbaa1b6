// speechcur/report.h

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

#ifndef SPEECHCUR_REPORT_H_
#define SPEECHCUR_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "speechcur/curation.h"

namespace speechcur {

/// Counts of frame SNR values in bins [k * width, (k + 1) * width). Sentinel
/// values are counted separately.
struct RhoHistogram {
  double bin_width = 5.0;
  std::map<std::int64_t, std::uint64_t> bins;
  std::uint64_t sentinel = 0;

  void Add(double rho);
  std::uint64_t total() const;
  double BinStart(std::int64_t index) const {
    return static_cast<double>(index) * bin_width;
  }
  /// Number of finite values with rho >= threshold. Exact when the threshold
  /// lies on a bin edge.
  std::uint64_t CountAtLeast(double threshold) const;
  /// Number of finite values with rho < threshold, under the same condition.
  std::uint64_t CountBelow(double threshold) const;
};

std::map<int, RhoHistogram> RhoHistogramByRound(std::span<const CuratedSegment> segs,
                                                double bin_width = 5.0);

/// Curated hours per round: sum of (end - start) / sample_rate / 3600.
std::map<int, double> AcceptedHoursByRound(std::span<const CuratedSegment> segs);

struct ManifestSummary {
  std::map<int, RhoHistogram> histograms;
  std::map<int, double> hours;
  std::map<int, std::uint64_t> segments;
  std::size_t malformed = 0;
};

ManifestSummary SummarizeSegments(std::span<const CuratedSegment> segs,
                                  double bin_width = 5.0);
/// Reads every manifest; malformed records are counted and skipped.
ManifestSummary SummarizeManifests(std::span<const std::filesystem::path> manifests,
                                   double bin_width = 5.0);

std::string SummaryToJson(const ManifestSummary& summary);
/// CSV with header round_id,segments,hours.
std::string HoursCsv(const ManifestSummary& summary);
/// CSV with header round_id,bin_start_db,bin_end_db,count; sentinel rows have
/// empty bounds.
std::string RhoHistogramCsv(const ManifestSummary& summary);

}  // namespace speechcur

#endif  // SPEECHCUR_REPORT_H_
