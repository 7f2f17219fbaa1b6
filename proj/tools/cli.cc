// tools/cli.cc

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

#include "cli.h"

#include <glob.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "speechcur/config.h"
#include "speechcur/curation.h"
#include "speechcur/error.h"
#include "speechcur/manifest.h"
#include "speechcur/quality.h"
#include "speechcur/report.h"
#include "speechcur/round.h"
#include "speechcur/synth.h"

namespace speechcur::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void SetUpLogging() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("speechcur");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("SECP_LOG"); env != nullptr && *env != '\0') {
    level = spdlog::level::from_str(env);
  }
  spdlog::set_level(level);
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

bool HasWildcard(const std::string& s) {
  return s.find_first_of("*?[") != std::string::npos;
}

struct CurateArgs {
  std::string config;
  std::vector<std::string> corpus;
  std::string manifest;
  std::optional<int> round;
  unsigned jobs = 0;
  std::string out;
};

int CmdCurate(const CurateArgs& a) {
  CurationConfig cfg = LoadCurationConfig(a.config);
  if (a.round) {
    cfg.round_id = *a.round;
    cfg.Validate();
  }
  const std::vector<fs::path> corpus = ExpandCorpus(a.corpus);
  if (corpus.empty()) {
    spdlog::error("no files matched the --corpus arguments");
    return kExitEmptyCorpus;
  }
  const CurationEngine engine(cfg);
  const RoundReport report = RunRound(corpus, engine, a.manifest, a.jobs);
  const fs::path report_path =
      a.out.empty() ? fs::path(a.manifest + ".round-" + std::to_string(cfg.round_id) +
                               ".report.json")
                    : fs::path(a.out);
  WriteText(report_path, RoundReportToJson(report) + "\n");

  std::cout << "round " << report.round_id << ": " << report.files_processed << "/"
            << report.files_total << " files processed, " << report.files_failed
            << " failed, " << report.segments << " segments, "
            << report.curated_seconds << " s curated\n"
            << "manifest: " << a.manifest << "\nreport: " << report_path.string() << "\n";
  if (report.files_processed == 0) return kExitFailure;
  return kExitOk;
}

struct SynthArgs {
  std::string out;
  std::size_t count = 10;
  double duration = 20.0;
  int sample_rate = 48000;
  std::string noise_kind = "white";
  double sigma = 15.0;
  std::string scale = "snr_db";
  double min_snr = 0.0;
  double max_snr = 60.0;
  std::uint64_t seed = 0;
};

int CmdSynth(const SynthArgs& a) {
  NoiseSpec base;
  base.kind = ParseNoiseKind(a.noise_kind);
  base.rayleigh_sigma = a.sigma;
  if (a.scale == "snr_db") {
    base.scale = RayleighScale::kSnrDb;
  } else if (a.scale == "noise_amplitude") {
    base.scale = RayleighScale::kNoiseAmplitude;
  } else {
    throw ConfigError("scale", "expected snr_db or noise_amplitude, got '" + a.scale + "'");
  }
  base.min_snr_db = a.min_snr;
  base.max_snr_db = a.max_snr;
  base.Validate();
  if (!(a.duration > 0.0)) throw ConfigError("duration", "must be positive");
  if (a.sample_rate <= 0) throw ConfigError("sample_rate", "must be positive");

  const fs::path out(a.out);
  fs::create_directories(out / "clean");
  fs::create_directories(out / "noisy");
  json files = json::array();
  for (std::size_t i = 0; i < a.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%04zu.wav", i);
    const std::uint64_t file_seed = a.seed * 1000003ull + i;
    const AudioBuffer clean = SynthSpeechProxy(a.duration, a.sample_rate, file_seed);
    NoiseSpec spec = base;
    spec.seed = file_seed;
    const NoisyMix mix = InjectNoise(clean, spec);
    WriteWav(out / "clean" / name, clean, SampleFormat::kFloat32);
    WriteWav(out / "noisy" / name, mix.noisy, SampleFormat::kFloat32);
    files.push_back({{"name", name}, {"seed", file_seed}, {"target_snr_db", mix.target_snr_db}});
  }
  json meta = {{"sample_rate", a.sample_rate},
               {"duration_s", a.duration},
               {"noise_kind", NoiseKindName(base.kind)},
               {"rayleigh_sigma", a.sigma},
               {"scale", a.scale},
               {"snr_clip", {a.min_snr, a.max_snr}},
               {"seed", a.seed},
               {"files", files}};
  WriteText(out / "synth.json", meta.dump(2) + "\n");
  std::cout << "wrote " << a.count << " clean/noisy pairs to " << out.string() << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string config;
  std::string pairs;
  std::string metric = "segmental_snr";
  std::string metric_command;
  std::string out;
};

int CmdEval(const EvalArgs& a) {
  const CurationConfig cfg = LoadCurationConfig(a.config);
  MetricRegistry registry = MetricRegistry::WithBuiltins();
  if (!a.metric_command.empty()) {
    ExternalCommand cmd;
    cmd.command_template = a.metric_command;
    registry.Register(a.metric, MakeExternalMetric(cmd));
  }
  if (!registry.Contains(a.metric)) {
    throw ConfigError("metric", "unknown metric '" + a.metric + "'");
  }

  const fs::path root(a.pairs);
  const fs::path clean_dir = root / "clean";
  const fs::path noisy_dir = root / "noisy";
  std::map<std::string, double> targets;
  if (fs::exists(root / "synth.json")) {
    std::ifstream in(root / "synth.json");
    const json meta = json::parse(in);
    for (const json& f : meta.at("files")) {
      targets[f.at("name").get<std::string>()] = f.at("target_snr_db").get<double>();
    }
  }

  std::set<std::string> clean_names, noisy_names;
  for (const auto& [dir, names] : {std::pair{clean_dir, &clean_names}, {noisy_dir, &noisy_names}}) {
    if (!fs::is_directory(dir)) continue;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".wav") {
        names->insert(e.path().filename().string());
      }
    }
  }
  std::vector<std::string> paired;
  std::size_t unpaired = 0;
  for (const std::string& n : noisy_names) {
    if (clean_names.count(n)) {
      paired.push_back(n);
    } else {
      ++unpaired;
    }
  }
  for (const std::string& n : clean_names) {
    if (!noisy_names.count(n)) ++unpaired;
  }
  if (paired.empty()) {
    spdlog::error("no clean/noisy pairs under {}", root.string());
    return kExitEmptyCorpus;
  }

  const std::unique_ptr<Enhancer> enhancer = MakeEnhancer(cfg.enhancer, cfg.stft);
  const QualityMetric& q = registry.Get(a.metric);
  json rows = json::array();
  double sum = 0.0;
  std::size_t failed = 0;
  for (const std::string& name : paired) {
    try {
      EvalTriple t;
      t.clean = ReadWav(clean_dir / name);
      t.noisy = ReadWav(noisy_dir / name);
      t.enhanced = Enhance(*enhancer, t.noisy, (noisy_dir / name).string());
      if (t.clean.sample_rate == cfg.sample_rate) {
        t.true_snr_db = FrameTrueSnrDb(t.clean, t.noisy, cfg.FrameSamples());
      }
      const QualityDelta d = DeltaQuality(t, a.metric, registry);
      json row = {{"name", name},
                  {"delta", d.delta},
                  {"q_noisy", q(t.clean, t.noisy)},
                  {"q_enhanced", q(t.clean, t.enhanced)}};
      if (auto it = targets.find(name); it != targets.end()) row["target_snr_db"] = it->second;
      rows.push_back(row);
      sum += d.delta;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      spdlog::error("{}: {}", name, e.what());
      ++failed;
    }
  }
  const std::size_t evaluated = rows.size();
  json report = {{"metric", a.metric},
                 {"enhancer_id", enhancer->Id()},
                 {"evaluated", evaluated},
                 {"failed", failed},
                 {"unpaired", unpaired},
                 {"mean_delta", evaluated ? json(sum / static_cast<double>(evaluated)) : json(nullptr)},
                 {"files", rows}};
  const std::string text = report.dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    WriteText(a.out, text);
    std::cout << "evaluated " << evaluated << " pairs (" << unpaired << " unpaired, " << failed
              << " failed); report: " << a.out << "\n";
  }
  return evaluated > 0 ? kExitOk : kExitFailure;
}

struct ReportArgs {
  std::vector<std::string> manifests;
  std::string out;
  double bin_width = 5.0;
};

int CmdReport(const ReportArgs& a) {
  if (!(a.bin_width > 0.0)) throw ConfigError("bin_width", "must be positive");
  std::vector<fs::path> paths(a.manifests.begin(), a.manifests.end());
  const ManifestSummary summary = SummarizeManifests(paths, a.bin_width);
  std::string prefix = a.out;
  if (prefix.size() > 5 && prefix.ends_with(".json")) prefix.resize(prefix.size() - 5);
  WriteText(prefix + ".json", SummaryToJson(summary) + "\n");
  WriteText(prefix + ".hours.csv", HoursCsv(summary));
  WriteText(prefix + ".rho.csv", RhoHistogramCsv(summary));
  for (const auto& [round, hours] : summary.hours) {
    std::cout << "round " << round << ": " << summary.segments.at(round) << " segments, "
              << hours << " h\n";
  }
  if (summary.malformed) std::cout << summary.malformed << " malformed records skipped\n";
  return kExitOk;
}

struct ExportArgs {
  std::string config;
  std::string manifest;
  std::string out;
  std::optional<double> min_rho;
  std::optional<double> max_rho;
  std::optional<int> round;
};

int CmdExportAb(const ExportArgs& a) {
  const CurationConfig cfg = LoadCurationConfig(a.config);
  const ManifestContents kept = FilterManifest(a.manifest, RhoBounds{a.min_rho, a.max_rho});
  std::vector<CuratedSegment> segs;
  for (const CuratedSegment& s : kept.segments) {
    if (!a.round || s.round_id == *a.round) segs.push_back(s);
  }
  const CurationEngine engine(cfg);
  const ExportReport r = ExportAbPairs(segs, engine, a.out);
  std::cout << "exported " << r.pairs << " A/B pairs to " << a.out << " (" << r.skipped
            << " skipped, " << kept.malformed << " malformed records)\n";
  return kExitOk;
}

}  // namespace

std::vector<fs::path> ExpandCorpus(const std::vector<std::string>& specs) {
  std::set<fs::path> out;
  for (const std::string& spec : specs) {
    if (fs::is_directory(spec)) {
      for (const auto& e : fs::directory_iterator(spec)) {
        if (e.is_regular_file() && e.path().extension() == ".wav") out.insert(e.path());
      }
    } else if (HasWildcard(spec)) {
      glob_t g{};
      if (glob(spec.c_str(), 0, nullptr, &g) == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.insert(g.gl_pathv[i]);
      }
      globfree(&g);
    } else if (!spec.empty()) {
      out.insert(spec);
    }
  }
  return {out.begin(), out.end()};
}

int RunCli(const std::vector<std::string>& args) {
  SetUpLogging();
  CLI::App app{"Speech corpus curation by enhancement-based frame SNR estimation"};
  app.require_subcommand(1);

  CurateArgs curate;
  CLI::App* c = app.add_subcommand("curate", "Curate a corpus and append to a manifest");
  c->add_option("--config", curate.config, "JSON configuration")->required();
  c->add_option("--corpus", curate.corpus, "File, directory or glob (repeatable)")->required();
  c->add_option("--manifest", curate.manifest, "JSON-lines manifest to append to")->required();
  c->add_option("--round", curate.round, "Round id (overrides the configuration)");
  c->add_option("--jobs", curate.jobs, "Worker threads (0: one per CPU)");
  c->add_option("--out", curate.out, "Round report path");

  SynthArgs synth;
  CLI::App* s = app.add_subcommand("synth", "Generate clean/noisy speech-proxy pairs");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--count", synth.count, "Number of pairs");
  s->add_option("--duration", synth.duration, "Seconds per file");
  s->add_option("--sample-rate", synth.sample_rate, "Sample rate in Hz");
  s->add_option("--noise-kind", synth.noise_kind, "white, pink or babble_proxy");
  s->add_option("--sigma", synth.sigma, "Rayleigh scale");
  s->add_option("--scale", synth.scale, "snr_db or noise_amplitude");
  s->add_option("--min-snr", synth.min_snr, "Lower SNR clip in dB");
  s->add_option("--max-snr", synth.max_snr, "Upper SNR clip in dB");
  s->add_option("--seed", synth.seed, "Base seed");

  EvalArgs eval;
  CLI::App* e = app.add_subcommand("eval", "Quality difference over clean/noisy pairs");
  e->add_option("--config", eval.config, "JSON configuration (enhancer)")->required();
  e->add_option("--corpus", eval.pairs, "Directory with clean/ and noisy/")->required();
  e->add_option("--metric", eval.metric, "Metric id");
  e->add_option("--metric-command", eval.metric_command,
                "External metric command with {reference} and {degraded}");
  e->add_option("--out", eval.out, "JSON report path (default: stdout)");

  ReportArgs report;
  CLI::App* r = app.add_subcommand("report", "Curated hours and frame SNR histograms");
  r->add_option("--manifest,manifests", report.manifests, "Manifests")->required();
  r->add_option("--out", report.out, "Output prefix")->required();
  r->add_option("--bin-width", report.bin_width, "Histogram bin width in dB");

  ExportArgs exp;
  CLI::App* x = app.add_subcommand("export-ab", "Write unprocessed/enhanced segment pairs");
  x->add_option("--config", exp.config, "Configuration used for curation")->required();
  x->add_option("--manifest", exp.manifest, "Manifest")->required();
  x->add_option("--out", exp.out, "Output directory")->required();
  x->add_option("--min-rho", exp.min_rho, "Keep segments whose lowest frame is >= this");
  x->add_option("--max-rho", exp.max_rho, "Keep segments whose highest frame is <= this");
  x->add_option("--round", exp.round, "Only this round");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitConfig;
  }

  try {
    if (*c) return CmdCurate(curate);
    if (*s) return CmdSynth(synth);
    if (*e) return CmdEval(eval);
    if (*r) return CmdReport(report);
    if (*x) return CmdExportAb(exp);
  } catch (const ConfigError& err) {
    spdlog::error("invalid configuration: {}", err.what());
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    spdlog::error("{}", err.what());
    return kExitFailure;
  }
  return kExitFailure;
}

int RunCli(int argc, char** argv) { return RunCli(std::vector<std::string>(argv, argv + argc)); }

}  // namespace speechcur::cli
