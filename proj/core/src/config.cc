// config.cc

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

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "speechcur/config.h"
#include "speechcur/hash.h"

namespace speechcur {

namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& obj, const std::string& prefix,
                       const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError(prefix + key, "unknown configuration key");
    }
  }
}

const json* Find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

template <typename T>
void Read(const json& obj, const std::string& prefix, const char* key, T* out) {
  const json* v = Find(obj, key);
  if (v == nullptr) {
    spdlog::info("config: {}{} not set, using default {}", prefix, key, json(*out).dump());
    return;
  }
  try {
    if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer()) throw ConfigError(prefix + key, "must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v->is_number()) throw ConfigError(prefix + key, "must be a number");
    } else {
      if (!v->is_string()) throw ConfigError(prefix + key, "must be a string");
    }
    *out = v->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(prefix + key, e.what());
  }
}

void ReadExternal(const json& obj, const std::string& prefix, ExternalCommand* cmd) {
  if (const json* v = Find(obj, "command")) {
    if (!v->is_string()) throw ConfigError(prefix + "command", "must be a string");
    cmd->command_template = v->get<std::string>();
  }
  if (const json* v = Find(obj, "exchange_dir")) {
    if (!v->is_string()) throw ConfigError(prefix + "exchange_dir", "must be a string");
    cmd->exchange_dir = v->get<std::string>();
  }
  if (const json* v = Find(obj, "timeout_s")) {
    if (!v->is_number_integer()) throw ConfigError(prefix + "timeout_s", "must be an integer");
    cmd->timeout = std::chrono::seconds(v->get<long long>());
  }
}

const json& Section(const json& root, const char* key, const json& empty) {
  const json* v = Find(root, key);
  if (v == nullptr) {
    spdlog::info("config: {} not set, using defaults", key);
    return empty;
  }
  if (!v->is_object()) throw ConfigError(key, "must be an object");
  return *v;
}

json ExternalJson(const ExternalCommand& cmd) {
  return json{{"command", cmd.command_template}, {"timeout_s", cmd.timeout.count()}};
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

CurationConfig ParseCurationConfig(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(document)", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("(document)", "must be a JSON object");
  RejectUnknownKeys(root, "", {"f_s", "N", "w_l", "s_th", "b_w", "rho_max", "rolloff_db",
                               "round_id", "stft", "enhancer", "vad"});

  CurationConfig cfg;
  Read(root, "", "f_s", &cfg.sample_rate);
  Read(root, "", "N", &cfg.segment_seconds);
  Read(root, "", "w_l", &cfg.frame_seconds);
  Read(root, "", "s_th", &cfg.snr_threshold_db);
  Read(root, "", "b_w", &cfg.min_bandwidth_hz);
  Read(root, "", "rho_max", &cfg.rho_max_db);
  Read(root, "", "rolloff_db", &cfg.rolloff_db);
  Read(root, "", "round_id", &cfg.round_id);

  const json empty = json::object();

  const json& stft = Section(root, "stft", empty);
  RejectUnknownKeys(stft, "stft.", {"window_len", "hop", "window"});
  Read(stft, "stft.", "window_len", &cfg.stft.window_len);
  cfg.stft.hop = cfg.stft.window_len / 4;
  Read(stft, "stft.", "hop", &cfg.stft.hop);
  std::string window(WindowName(cfg.stft.window));
  Read(stft, "stft.", "window", &window);
  cfg.stft.window = ParseWindowKind(window);

  const json& enh = Section(root, "enhancer", empty);
  RejectUnknownKeys(enh, "enhancer.", {"kind", "id", "gate_threshold_db", "attenuation_db",
                                        "reference_dir", "command", "exchange_dir",
                                        "timeout_s"});
  std::string kind(EnhancerKindName(cfg.enhancer.kind));
  Read(enh, "enhancer.", "kind", &kind);
  cfg.enhancer.kind = ParseEnhancerKind(kind);
  if (const json* v = Find(enh, "id")) {
    if (!v->is_string()) throw ConfigError("enhancer.id", "must be a string");
    cfg.enhancer.label = v->get<std::string>();
  }
  if (cfg.enhancer.kind == EnhancerKind::kSpectralGate) {
    Read(enh, "enhancer.", "gate_threshold_db", &cfg.enhancer.gate_threshold_db);
    Read(enh, "enhancer.", "attenuation_db", &cfg.enhancer.attenuation_db);
  }
  if (const json* v = Find(enh, "reference_dir")) {
    if (!v->is_string()) throw ConfigError("enhancer.reference_dir", "must be a string");
    cfg.enhancer.reference_dir = v->get<std::string>();
  }
  ReadExternal(enh, "enhancer.", &cfg.enhancer.external);

  const json& vad = Section(root, "vad", empty);
  RejectUnknownKeys(vad, "vad.", {"kind", "w_v", "relative_threshold_db", "absolute_floor_db",
                                   "command", "exchange_dir", "timeout_s"});
  std::string vad_kind(VadKindName(cfg.vad.kind));
  Read(vad, "vad.", "kind", &vad_kind);
  cfg.vad.kind = ParseVadKind(vad_kind);
  Read(vad, "vad.", "w_v", &cfg.vad.window_seconds);
  if (cfg.vad.kind == VadKind::kEnergy) {
    Read(vad, "vad.", "relative_threshold_db", &cfg.vad.relative_threshold_db);
    Read(vad, "vad.", "absolute_floor_db", &cfg.vad.absolute_floor_db);
  }
  ReadExternal(vad, "vad.", &cfg.vad.external);

  cfg.Validate();
  return cfg;
}

CurationConfig LoadCurationConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("(file)", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseCurationConfig(text.str());
}

std::string CanonicalConfigText(const CurationConfig& config) {
  json enhancer{{"kind", EnhancerKindName(config.enhancer.kind)}};
  switch (config.enhancer.kind) {
    case EnhancerKind::kIdentity:
      break;
    case EnhancerKind::kSpectralGate:
      enhancer["gate_threshold_db"] = config.enhancer.gate_threshold_db;
      enhancer["attenuation_db"] = config.enhancer.attenuation_db;
      break;
    case EnhancerKind::kOracle:
      enhancer["reference_dir"] = config.enhancer.reference_dir.string();
      break;
    case EnhancerKind::kExternal:
      enhancer.update(ExternalJson(config.enhancer.external));
      break;
  }
  json vad{{"kind", VadKindName(config.vad.kind)}, {"w_v", config.vad.window_seconds}};
  if (config.vad.kind == VadKind::kEnergy) {
    vad["relative_threshold_db"] = config.vad.relative_threshold_db;
    vad["absolute_floor_db"] = config.vad.absolute_floor_db;
  } else if (config.vad.kind == VadKind::kExternal) {
    vad.update(ExternalJson(config.vad.external));
  }
  const json doc{
      {"f_s", config.sample_rate},
      {"N", config.segment_seconds},
      {"w_l", config.frame_seconds},
      {"s_th", config.snr_threshold_db},
      {"b_w", config.min_bandwidth_hz},
      {"rho_max", config.rho_max_db},
      {"rolloff_db", config.rolloff_db},
      {"stft",
       {{"window_len", config.stft.window_len},
        {"hop", config.stft.hop},
        {"window", WindowName(config.stft.window)}}},
      {"enhancer", enhancer},
      {"vad", vad},
  };
  return doc.dump();
}

std::string ConfigHash(const CurationConfig& config) {
  return Sha256Hex(CanonicalConfigText(config));
}

}  // namespace speechcur
