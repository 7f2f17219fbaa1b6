// manifest.cc

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
#include <string>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "speechcur/manifest.h"

namespace speechcur {

namespace {

using nlohmann::json;

const char* const kFields[] = {"source_uri",  "round_id", "start_sample",
                               "end_sample",  "sample_rate", "frame_rho",
                               "frame_fc",    "config_hash", "enhancer_id"};

bool IsSha256Hex(const std::string& s) {
  return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

[[noreturn]] void Invalid(const CuratedSegment& seg, const std::string& reason) {
  throw FormatError("segment [" + std::to_string(seg.start_sample) + ", " +
                    std::to_string(seg.end_sample) + ") of '" + seg.source_uri +
                    "': " + reason);
}

}  // namespace

SegmentRules SegmentRules::FromConfig(const CurationConfig& config) {
  return SegmentRules{config.FramesPerSegment(), config.FrameSamples(),
                      config.snr_threshold_db, config.min_bandwidth_hz};
}

void ValidateSegment(const CuratedSegment& seg) {
  if (seg.source_uri.empty()) Invalid(seg, "empty source_uri");
  if (seg.round_id < 0) Invalid(seg, "negative round_id");
  if (seg.sample_rate <= 0) Invalid(seg, "non-positive sample_rate");
  if (seg.start_sample < 0 || seg.end_sample <= seg.start_sample) {
    Invalid(seg, "bounds are not an increasing, non-negative pair");
  }
  if (seg.frame_rho.empty() || seg.frame_rho.size() != seg.frame_fc.size()) {
    Invalid(seg, "frame_rho and frame_fc must be non-empty and equally long");
  }
  const auto frames = static_cast<std::int64_t>(seg.frame_rho.size());
  const std::int64_t span = seg.end_sample - seg.start_sample;
  if (span % frames != 0) Invalid(seg, "length is not a whole number of frames");
  if (seg.start_sample % (span / frames) != 0) Invalid(seg, "start is not frame-aligned");
  for (std::size_t i = 0; i < seg.frame_rho.size(); ++i) {
    if (!std::isfinite(seg.frame_rho[i]) || !std::isfinite(seg.frame_fc[i])) {
      Invalid(seg, "non-finite frame metadata");
    }
  }
  if (!IsSha256Hex(seg.config_hash)) Invalid(seg, "config_hash is not a SHA-256 hex digest");
}

void ValidateSegment(const CuratedSegment& seg, const SegmentRules& rules) {
  ValidateSegment(seg);
  if (seg.frame_rho.size() != rules.frames_per_segment) {
    Invalid(seg, "expected " + std::to_string(rules.frames_per_segment) + " frames");
  }
  const auto expected =
      static_cast<std::int64_t>(rules.frames_per_segment * rules.frame_samples);
  if (seg.end_sample - seg.start_sample != expected) {
    Invalid(seg, "expected " + std::to_string(expected) + " samples");
  }
  if (seg.start_sample % static_cast<std::int64_t>(rules.frame_samples) != 0) {
    Invalid(seg, "start is not aligned to the frame grid");
  }
  for (double rho : seg.frame_rho) {
    if (rho < rules.snr_threshold_db) Invalid(seg, "frame below the SNR threshold");
  }
  for (double fc : seg.frame_fc) {
    if (fc < rules.min_bandwidth_hz) Invalid(seg, "frame below the bandwidth threshold");
  }
}

std::string SegmentToJson(const CuratedSegment& seg) {
  const json j{
      {"source_uri", seg.source_uri},   {"round_id", seg.round_id},
      {"start_sample", seg.start_sample}, {"end_sample", seg.end_sample},
      {"sample_rate", seg.sample_rate}, {"frame_rho", seg.frame_rho},
      {"frame_fc", seg.frame_fc},       {"config_hash", seg.config_hash},
      {"enhancer_id", seg.enhancer_id},
  };
  return j.dump();
}

CuratedSegment SegmentFromJson(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("manifest record is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("manifest record is not a JSON object");
  if (j.size() != std::size(kFields)) {
    throw FormatError("manifest record must have exactly " +
                      std::to_string(std::size(kFields)) + " fields");
  }
  CuratedSegment seg;
  try {
    seg.source_uri = j.at("source_uri").get<std::string>();
    seg.round_id = j.at("round_id").get<int>();
    seg.start_sample = j.at("start_sample").get<std::int64_t>();
    seg.end_sample = j.at("end_sample").get<std::int64_t>();
    seg.sample_rate = j.at("sample_rate").get<int>();
    seg.frame_rho = j.at("frame_rho").get<std::vector<double>>();
    seg.frame_fc = j.at("frame_fc").get<std::vector<double>>();
    seg.config_hash = j.at("config_hash").get<std::string>();
    seg.enhancer_id = j.at("enhancer_id").get<std::string>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest record has a bad field: ") + e.what());
  }
  ValidateSegment(seg);
  return seg;
}

ManifestContents ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open manifest");
  ManifestContents out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.segments.push_back(SegmentFromJson(line));
    } catch (const FormatError& e) {
      ++out.malformed;
      spdlog::warn("{}:{}: skipped malformed record: {}", path.string(), line_no, e.what());
    }
  }
  return out;
}

ManifestWriter::ManifestWriter(const std::filesystem::path& path,
                               std::optional<SegmentRules> rules)
    : path_(path), rules_(rules), out_(path, std::ios::app) {
  if (!out_) throw IoError(path.string() + ": cannot open manifest for appending");
}

void ManifestWriter::Append(const CuratedSegment& seg) {
  Append(std::span<const CuratedSegment>(&seg, 1));
}

void ManifestWriter::Append(std::span<const CuratedSegment> segs) {
  std::string lines;
  for (const CuratedSegment& seg : segs) {
    if (rules_) {
      ValidateSegment(seg, *rules_);
    } else {
      ValidateSegment(seg);
    }
    lines += SegmentToJson(seg);
    lines += '\n';
  }
  std::lock_guard<std::mutex> lock(mu_);
  out_ << lines;
  out_.flush();
  if (!out_) throw IoError(path_.string() + ": manifest write failed");
  written_ += segs.size();
}

std::size_t ManifestWriter::written() const {
  std::lock_guard<std::mutex> lock(mu_);
  return written_;
}

bool PassesBounds(const CuratedSegment& seg, const RhoBounds& bounds) {
  if (seg.frame_rho.empty()) return false;
  const auto [lo, hi] = std::minmax_element(seg.frame_rho.begin(), seg.frame_rho.end());
  if (bounds.min_rho && *lo < *bounds.min_rho) return false;
  if (bounds.max_rho && *hi > *bounds.max_rho) return false;
  return true;
}

std::vector<CuratedSegment> FilterSegments(std::span<const CuratedSegment> segs,
                                           const RhoBounds& bounds) {
  std::vector<CuratedSegment> out;
  std::copy_if(segs.begin(), segs.end(), std::back_inserter(out),
               [&](const CuratedSegment& s) { return PassesBounds(s, bounds); });
  return out;
}

ManifestContents FilterManifest(const std::filesystem::path& path,
                                const RhoBounds& bounds) {
  ManifestContents all = ReadManifest(path);
  return ManifestContents{FilterSegments(all.segments, bounds), all.malformed};
}

}  // namespace speechcur
