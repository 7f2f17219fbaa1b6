// speechcur/manifest.h

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

#ifndef SPEECHCUR_MANIFEST_H_
#define SPEECHCUR_MANIFEST_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speechcur/curation.h"

namespace speechcur {

/// Configuration-dependent segment invariants.
struct SegmentRules {
  std::size_t frames_per_segment = 12;
  std::size_t frame_samples = 48000;
  double snr_threshold_db = 20.0;
  double min_bandwidth_hz = 20000.0;

  static SegmentRules FromConfig(const CurationConfig& config);
};

/// Structural checks that need no configuration: ordered, frame-aligned
/// bounds, matching metadata lengths, finite values and a SHA-256 config hash.
/// Throws FormatError.
void ValidateSegment(const CuratedSegment& seg);
/// Structural checks plus segment length, frame size and both gate bounds.
void ValidateSegment(const CuratedSegment& seg, const SegmentRules& rules);

/// One JSON object on one line (no trailing newline). Keys are sorted, so
/// equal segments serialize to equal bytes.
std::string SegmentToJson(const CuratedSegment& seg);
/// Parses and structurally validates one record. Throws FormatError.
CuratedSegment SegmentFromJson(std::string_view line);

struct ManifestContents {
  std::vector<CuratedSegment> segments;
  /// Lines that failed to parse or validate; they are skipped.
  std::size_t malformed = 0;
};

/// Reads a JSON-lines manifest. Blank lines are ignored. Throws IoError when
/// the file cannot be opened.
ManifestContents ReadManifest(const std::filesystem::path& path);

/// Append-only manifest writer. Appends are serialized, validated and flushed
/// one line at a time. The file is created if missing.
class ManifestWriter {
 public:
  explicit ManifestWriter(const std::filesystem::path& path,
                          std::optional<SegmentRules> rules = std::nullopt);

  void Append(const CuratedSegment& seg);
  void Append(std::span<const CuratedSegment> segs);
  std::size_t written() const;

 private:
  std::filesystem::path path_;
  std::optional<SegmentRules> rules_;
  mutable std::mutex mu_;
  std::ofstream out_;
  std::size_t written_ = 0;
};

/// Frame SNR bounds: min_rho keeps segments whose lowest frame is >= bound,
/// max_rho keeps segments whose highest frame is <= bound.
struct RhoBounds {
  std::optional<double> min_rho;
  std::optional<double> max_rho;
};

bool PassesBounds(const CuratedSegment& seg, const RhoBounds& bounds);
std::vector<CuratedSegment> FilterSegments(std::span<const CuratedSegment> segs,
                                           const RhoBounds& bounds);
/// Filtered manifest; `malformed` counts skipped records.
ManifestContents FilterManifest(const std::filesystem::path& path,
                                const RhoBounds& bounds);

}  // namespace speechcur

#endif  // SPEECHCUR_MANIFEST_H_
