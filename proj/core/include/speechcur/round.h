// speechcur/round.h

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

#ifndef SPEECHCUR_ROUND_H_
#define SPEECHCUR_ROUND_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "speechcur/curation.h"
#include "speechcur/manifest.h"
#include "speechcur/report.h"

namespace speechcur {

struct FileFailure {
  std::string uri;
  std::string reason;
};

struct RoundReport {
  int round_id = 0;
  std::size_t files_total = 0;
  std::size_t files_processed = 0;
  std::size_t files_failed = 0;
  std::vector<FileFailure> failures;
  std::size_t segments = 0;
  double curated_seconds = 0.0;
  RhoHistogram histogram;
};

std::string RoundReportToJson(const RoundReport& report);

/// Curates every file in `corpus` with up to `jobs` worker threads (0 means one
/// per hardware thread) and appends the segments to `manifest`. Records are
/// committed in corpus order, so reruns produce identical bytes. Unreadable or
/// failing files become failure records; the round itself only aborts when the
/// manifest cannot be written.
RoundReport RunRound(std::span<const std::filesystem::path> corpus,
                     const CurationEngine& engine,
                     const std::filesystem::path& manifest, unsigned jobs = 0);

/// Runs successive rounds over one corpus. Everything but the enhancer and the
/// round id is fixed at construction, including the VAD.
class RoundOrchestrator {
 public:
  explicit RoundOrchestrator(CurationConfig base);

  const CurationConfig& base() const { return base_; }

  RoundReport Run(int round_id, const EnhancerSpec& enhancer,
                  std::span<const std::filesystem::path> corpus,
                  const std::filesystem::path& manifest, unsigned jobs = 0) const;

 private:
  CurationConfig base_;
};

struct ExportReport {
  std::size_t pairs = 0;
  std::size_t skipped = 0;
  std::vector<std::filesystem::path> files;
};

/// For each segment writes `<stem>_r<round>_<start>-<end>_A.wav` (unprocessed
/// slice of the source) and the matching `_B.wav` (same slice of the
/// re-enhanced source), both float-32. Segments whose source is missing or
/// whose config hash differs from the engine's are skipped and counted.
ExportReport ExportAbPairs(std::span<const CuratedSegment> segments,
                           const CurationEngine& engine,
                           const std::filesystem::path& out_dir);

}  // namespace speechcur

#endif  // SPEECHCUR_ROUND_H_
