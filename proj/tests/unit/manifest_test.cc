// tests/unit/manifest_test.cc

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
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "speechcur/manifest.h"
#include "speechcur/report.h"
#include "test_support.h"

namespace speechcur {
namespace {

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CuratedSegment Good() {
  CuratedSegment s;
  s.source_uri = "a.wav";
  s.start_sample = 48000 * 3;
  s.end_sample = s.start_sample + 48000 * 12;
  s.sample_rate = 48000;
  s.frame_rho.assign(12, 30.0);
  s.frame_fc.assign(12, 24000.0);
  s.config_hash = std::string(64, 'a');
  s.enhancer_id = "identity";
  return s;
}

TEST(Manifest, JsonRoundTripIsExact) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const CuratedSegment s = testing::RandomSegment(rng, 12, 48000, 48000);
    const std::string line = SegmentToJson(s);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    const CuratedSegment back = SegmentFromJson(line);
    ASSERT_EQ(back, s);
    ASSERT_EQ(SegmentToJson(back), line);
  }
}

TEST(Manifest, FileRoundTripIsExact) {
  testing::TempDir dir;
  std::mt19937_64 rng(2);
  std::vector<CuratedSegment> segs;
  for (int i = 0; i < 200; ++i) segs.push_back(testing::RandomSegment(rng, 12, 48000, 48000));
  {
    ManifestWriter w(dir / "m.jsonl");
    w.Append(segs);
    EXPECT_EQ(w.written(), 200u);
  }
  const ManifestContents back = ReadManifest(dir / "m.jsonl");
  EXPECT_EQ(back.malformed, 0u);
  EXPECT_EQ(back.segments, segs);
  // Rewriting what was read reproduces the file byte for byte.
  {
    ManifestWriter w(dir / "m2.jsonl");
    w.Append(back.segments);
  }
  EXPECT_EQ(ReadAll(dir / "m.jsonl"), ReadAll(dir / "m2.jsonl"));
}

TEST(Manifest, WriterAppends) {
  testing::TempDir dir;
  { ManifestWriter(dir / "m.jsonl").Append(Good()); }
  { ManifestWriter(dir / "m.jsonl").Append(Good()); }
  EXPECT_EQ(ReadManifest(dir / "m.jsonl").segments.size(), 2u);
}

TEST(Manifest, ConcurrentAppendsKeepLinesWhole) {
  testing::TempDir dir;
  ManifestWriter w(dir / "m.jsonl");
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&w, t] {
      std::mt19937_64 rng(static_cast<std::uint64_t>(t));
      for (int i = 0; i < 50; ++i) w.Append(testing::RandomSegment(rng, 12, 48000, 48000));
    });
  }
  for (auto& t : threads) t.join();
  const ManifestContents back = ReadManifest(dir / "m.jsonl");
  EXPECT_EQ(back.segments.size(), 400u);
  EXPECT_EQ(back.malformed, 0u);
}

TEST(Manifest, MalformedLinesAreCountedAndSkipped) {
  testing::TempDir dir;
  std::ofstream(dir / "m.jsonl") << SegmentToJson(Good()) << "\n"
                                  << "{not json\n"
                                  << "\n"
                                  << R"({"source_uri": "x"})" << "\n"
                                  << SegmentToJson(Good()) << "\n";
  const ManifestContents c = ReadManifest(dir / "m.jsonl");
  EXPECT_EQ(c.segments.size(), 2u);
  EXPECT_EQ(c.malformed, 2u);
  EXPECT_THROW(ReadManifest(dir / "absent.jsonl"), IoError);
}

TEST(Manifest, StructuralValidation) {
  EXPECT_NO_THROW(ValidateSegment(Good()));
  auto bad = [](auto mutate) {
    CuratedSegment s = Good();
    mutate(s);
    return s;
  };
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.source_uri.clear(); })), FormatError);
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.end_sample = s.start_sample; })), FormatError);
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.start_sample = -48000; })), FormatError);
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.frame_fc.pop_back(); })), FormatError);
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.start_sample += 1; s.end_sample += 1; })),
               FormatError);
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.config_hash = "abc"; })), FormatError);
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.frame_rho[3] = std::nan(""); })), FormatError);
  EXPECT_THROW(ValidateSegment(bad([](auto& s) { s.sample_rate = 0; })), FormatError);
}

TEST(Manifest, RuleValidation) {
  const SegmentRules rules = SegmentRules::FromConfig(CurationConfig{});
  EXPECT_NO_THROW(ValidateSegment(Good(), rules));
  CuratedSegment s = Good();
  s.frame_rho[0] = 19.0;
  EXPECT_THROW(ValidateSegment(s, rules), FormatError);
  s = Good();
  s.frame_fc[11] = 19999.0;
  EXPECT_THROW(ValidateSegment(s, rules), FormatError);
  s = Good();
  s.frame_rho.resize(6);
  s.frame_fc.resize(6);
  s.end_sample = s.start_sample + 6 * 48000;
  EXPECT_THROW(ValidateSegment(s, rules), FormatError);
  testing::TempDir dir;
  ManifestWriter w(dir / "m.jsonl", rules);
  EXPECT_THROW(w.Append(s), FormatError);
  EXPECT_EQ(w.written(), 0u);
}

TEST(Manifest, FilterMatchesLinearScan) {
  std::mt19937_64 rng(3);
  std::vector<CuratedSegment> segs;
  for (int i = 0; i < 300; ++i) segs.push_back(testing::RandomSegment(rng, 12, 48000, 48000));
  std::uniform_real_distribution<double> bound(-30.0, 110.0);
  for (int trial = 0; trial < 100; ++trial) {
    RhoBounds b;
    if (trial % 3 != 0) b.min_rho = bound(rng);
    if (trial % 3 != 1) b.max_rho = bound(rng);
    std::vector<CuratedSegment> expected;
    for (const CuratedSegment& s : segs) {
      bool keep = true;
      for (double r : s.frame_rho) {
        if (b.min_rho && r < *b.min_rho) keep = false;
        if (b.max_rho && r > *b.max_rho) keep = false;
      }
      if (keep) expected.push_back(s);
    }
    ASSERT_EQ(FilterSegments(segs, b), expected);
  }
  EXPECT_EQ(FilterSegments(segs, RhoBounds{}).size(), segs.size());
}

TEST(Manifest, FilterManifestCarriesMalformedCount) {
  testing::TempDir dir;
  CuratedSegment lo = Good();
  lo.frame_rho[0] = 21.0;
  std::ofstream(dir / "m.jsonl") << SegmentToJson(Good()) << "\n" << SegmentToJson(lo) << "\nxx\n";
  const ManifestContents c = FilterManifest(dir / "m.jsonl", RhoBounds{25.0, std::nullopt});
  EXPECT_EQ(c.segments.size(), 1u);
  EXPECT_EQ(c.malformed, 1u);
}

// Reporting.

TEST(Report, HistogramMatchesDirectCount) {
  std::mt19937_64 rng(4);
  std::vector<CuratedSegment> segs;
  for (int i = 0; i < 100; ++i) segs.push_back(testing::RandomSegment(rng, 12, 48000, 48000));
  const auto hists = RhoHistogramByRound(segs, 5.0);
  std::map<int, std::map<std::int64_t, std::uint64_t>> expected;
  std::map<int, std::uint64_t> sentinels;
  for (const CuratedSegment& s : segs) {
    for (double r : s.frame_rho) {
      if (r == kRhoSentinel) {
        ++sentinels[s.round_id];
      } else {
        ++expected[s.round_id][static_cast<std::int64_t>(std::floor(r / 5.0))];
      }
    }
  }
  for (const auto& [round, bins] : expected) {
    ASSERT_TRUE(hists.count(round));
    EXPECT_EQ(hists.at(round).bins, bins);
    EXPECT_EQ(hists.at(round).sentinel, sentinels[round]);
  }
  for (const auto& [round, h] : hists) {
    std::uint64_t at_least_45 = 0, below_30 = 0;
    for (const CuratedSegment& s : segs) {
      if (s.round_id != round) continue;
      for (double r : s.frame_rho) {
        if (r == kRhoSentinel) continue;
        at_least_45 += r >= 45.0;
        below_30 += r < 30.0;
      }
    }
    EXPECT_EQ(h.CountAtLeast(45.0), at_least_45);
    EXPECT_EQ(h.CountBelow(30.0), below_30);
  }
}

TEST(Report, SingleBin) {
  CuratedSegment s = Good();
  s.frame_rho.assign(12, 22.0);
  const auto h = RhoHistogramByRound(std::vector<CuratedSegment>{s}, 5.0);
  ASSERT_EQ(h.at(0).bins.size(), 1u);
  EXPECT_EQ(h.at(0).bins.begin()->first, 4);
  EXPECT_EQ(h.at(0).BinStart(4), 20.0);
  EXPECT_EQ(h.at(0).bins.begin()->second, 12u);
}

TEST(Report, HoursAreExact) {
  EXPECT_TRUE(AcceptedHoursByRound({}).empty());
  EXPECT_EQ(SummarizeSegments({}).hours.size(), 0u);
  std::vector<CuratedSegment> segs(300, Good());
  EXPECT_EQ(AcceptedHoursByRound(segs).at(0), 1.0);
  segs[0].round_id = 1;
  const auto hours = AcceptedHoursByRound(segs);
  EXPECT_DOUBLE_EQ(hours.at(0), 299.0 * 12.0 / 3600.0);
  EXPECT_DOUBLE_EQ(hours.at(1), 12.0 / 3600.0);
}

TEST(Report, SummaryOutputs) {
  testing::TempDir dir;
  std::vector<CuratedSegment> segs(3, Good());
  segs[2].round_id = 1;
  { ManifestWriter(dir / "m.jsonl").Append(segs); }
  std::ofstream(dir / "m.jsonl", std::ios::app) << "junk\n";
  const std::vector<std::filesystem::path> files{dir / "m.jsonl"};
  const ManifestSummary sum = SummarizeManifests(files);
  EXPECT_EQ(sum.malformed, 1u);
  EXPECT_EQ(sum.segments.at(0), 2u);
  EXPECT_EQ(sum.segments.at(1), 1u);
  const std::string hours = HoursCsv(sum);
  EXPECT_EQ(hours.rfind("round_id,segments,hours\n", 0), 0u);
  EXPECT_NE(hours.find("\n1,1,"), std::string::npos);
  const std::string rho = RhoHistogramCsv(sum);
  EXPECT_EQ(rho.rfind("round_id,bin_start_db,bin_end_db,count\n", 0), 0u);
  EXPECT_NE(rho.find("0,30,35,24"), std::string::npos) << rho;
  EXPECT_NE(SummaryToJson(sum).find("\"malformed_records\": 1"), std::string::npos);
}

}  // namespace
}  // namespace speechcur
