// speechcur/config.h

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

#ifndef SPEECHCUR_CONFIG_H_
#define SPEECHCUR_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "speechcur/curation.h"

namespace speechcur {

/// Parses a JSON configuration document. Keys: f_s, N, w_l, s_th, b_w,
/// rho_max, rolloff_db, round_id, and the objects stft, enhancer and vad.
/// Missing keys take their defaults (each one is logged); unknown keys and
/// invalid values throw ConfigError naming the field.
CurationConfig ParseCurationConfig(std::string_view json_text);
CurationConfig LoadCurationConfig(const std::filesystem::path& path);

/// Compact JSON of every processing parameter with sorted keys. round_id is
/// left out so that one parameter set keeps its hash across rounds.
std::string CanonicalConfigText(const CurationConfig& config);

/// Lowercase hex SHA-256 of CanonicalConfigText.
std::string ConfigHash(const CurationConfig& config);

}  // namespace speechcur

#endif  // SPEECHCUR_CONFIG_H_
