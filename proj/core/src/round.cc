// round.cc

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
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "speechcur/round.h"

namespace speechcur {

namespace {

struct FileOutcome {
  bool done = false;
  std::vector<CuratedSegment> segments;
  std::optional<std::string> failure;
};

}  // namespace

std::string RoundReportToJson(const RoundReport& report) {
  using nlohmann::json;
  json failures = json::array();
  for (const FileFailure& f : report.failures) {
    failures.push_back({{"uri", f.uri}, {"reason", f.reason}});
  }
  json bins = json::array();
  for (const auto& [index, count] : report.histogram.bins) {
    bins.push_back({{"start_db", report.histogram.BinStart(index)},
                    {"end_db", report.histogram.BinStart(index + 1)},
                    {"count", count}});
  }
  const json doc{
      {"round_id", report.round_id},
      {"files_total", report.files_total},
      {"files_processed", report.files_processed},
      {"files_failed", report.files_failed},
      {"failures", failures},
      {"segments", report.segments},
      {"curated_seconds", report.curated_seconds},
      {"rho_histogram",
       {{"bin_width_db", report.histogram.bin_width},
        {"bins", bins},
        {"sentinel", report.histogram.sentinel}}},
  };
  return doc.dump(2);
}

RoundReport RunRound(std::span<const std::filesystem::path> corpus,
                     const CurationEngine& engine,
                     const std::filesystem::path& manifest, unsigned jobs) {
  ManifestWriter writer(manifest, SegmentRules::FromConfig(engine.config()));
  RoundReport report;
  report.round_id = engine.config().round_id;
  report.files_total = corpus.size();

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::clamp<std::size_t>(corpus.size(), 1, jobs));

  std::vector<FileOutcome> outcomes(corpus.size());
  std::atomic<std::size_t> next{0};
  std::mutex commit_mu;
  std::size_t next_commit = 0;
  std::exception_ptr fatal;

  // Folds finished outcomes into the report in corpus order. Caller holds
  // commit_mu.
  auto commit_ready = [&] {
    while (next_commit < outcomes.size() && outcomes[next_commit].done) {
      FileOutcome& o = outcomes[next_commit];
      const std::string uri = corpus[next_commit].string();
      if (o.failure) {
        ++report.files_failed;
        report.failures.push_back({uri, *o.failure});
      } else {
        ++report.files_processed;
        writer.Append(o.segments);
        for (const CuratedSegment& seg : o.segments) {
          ++report.segments;
          report.curated_seconds +=
              static_cast<double>(seg.end_sample - seg.start_sample) / seg.sample_rate;
          for (double rho : seg.frame_rho) report.histogram.Add(rho);
        }
      }
      o.segments.clear();
      o.segments.shrink_to_fit();
      ++next_commit;
    }
  };

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < corpus.size(); i = next.fetch_add(1)) {
      FileOutcome o;
      const std::string uri = corpus[i].string();
      try {
        const AudioBuffer input = ReadWav(corpus[i]);
        o.segments = engine.Curate(input, uri).segments;
        spdlog::info("{}: {} segments", uri, o.segments.size());
      } catch (const std::exception& e) {
        o.failure = e.what();
        spdlog::error("{}: {}", uri, e.what());
      }
      o.done = true;
      std::lock_guard<std::mutex> lock(commit_mu);
      if (fatal) return;
      outcomes[i] = std::move(o);
      try {
        commit_ready();
      } catch (...) {
        fatal = std::current_exception();
        next.store(corpus.size());
        return;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);
  return report;
}

RoundOrchestrator::RoundOrchestrator(CurationConfig base) : base_(std::move(base)) {
  base_.Validate();
}

RoundReport RoundOrchestrator::Run(int round_id, const EnhancerSpec& enhancer,
                                   std::span<const std::filesystem::path> corpus,
                                   const std::filesystem::path& manifest,
                                   unsigned jobs) const {
  CurationConfig cfg = base_;
  cfg.round_id = round_id;
  cfg.enhancer = enhancer;
  return RunRound(corpus, CurationEngine(std::move(cfg)), manifest, jobs);
}

ExportReport ExportAbPairs(std::span<const CuratedSegment> segments,
                           const CurationEngine& engine,
                           const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  ExportReport report;

  // Enhancement is non-causal, so each source is enhanced whole, once.
  std::map<std::string, std::vector<const CuratedSegment*>> by_source;
  std::vector<std::string> order;
  for (const CuratedSegment& seg : segments) {
    auto [it, inserted] = by_source.try_emplace(seg.source_uri);
    if (inserted) order.push_back(seg.source_uri);
    it->second.push_back(&seg);
  }

  for (const std::string& uri : order) {
    const auto& segs = by_source[uri];
    AudioBuffer source;
    AudioBuffer enhanced;
    try {
      source = ReadWav(uri);
      enhanced = Enhance(engine.enhancer(), source, uri);
    } catch (const std::exception& e) {
      spdlog::warn("export: skipping {} segment(s) of {}: {}", segs.size(), uri, e.what());
      report.skipped += segs.size();
      continue;
    }
    const std::string stem = std::filesystem::path(uri).stem().string();
    for (const CuratedSegment* seg : segs) {
      if (seg->config_hash != engine.config_hash()) {
        spdlog::warn("export: {} [{}, {}) was curated with config {}, not {}; skipped",
                     uri, seg->start_sample, seg->end_sample, seg->config_hash,
                     engine.config_hash());
        ++report.skipped;
        continue;
      }
      if (seg->sample_rate != source.sample_rate ||
          seg->end_sample > static_cast<std::int64_t>(source.size())) {
        spdlog::warn("export: {} [{}, {}) does not fit the source file; skipped", uri,
                     seg->start_sample, seg->end_sample);
        ++report.skipped;
        continue;
      }
      const auto begin = static_cast<std::ptrdiff_t>(seg->start_sample);
      const auto end = static_cast<std::ptrdiff_t>(seg->end_sample);
      AudioBuffer a{{source.samples.begin() + begin, source.samples.begin() + end},
                    source.sample_rate};
      AudioBuffer b{{enhanced.samples.begin() + begin, enhanced.samples.begin() + end},
                    enhanced.sample_rate};
      const std::string base = stem + "_r" + std::to_string(seg->round_id) + "_" +
                               std::to_string(seg->start_sample) + "-" +
                               std::to_string(seg->end_sample);
      const auto a_path = out_dir / (base + "_A.wav");
      const auto b_path = out_dir / (base + "_B.wav");
      WriteWav(a_path, a, SampleFormat::kFloat32);
      WriteWav(b_path, b, SampleFormat::kFloat32);
      report.files.push_back(a_path);
      report.files.push_back(b_path);
      ++report.pairs;
    }
  }
  return report;
}

}  // namespace speechcur
