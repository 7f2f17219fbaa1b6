// speechcur/external.h

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

#ifndef SPEECHCUR_EXTERNAL_H_
#define SPEECHCUR_EXTERNAL_H_

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "speechcur/audio.h"

namespace speechcur {

/// A shell command template exchanging float-32 WAV files with an external
/// model. `{input}` and `{output}` are replaced by quoted file paths.
struct ExternalCommand {
  std::string command_template;
  /// Directory for exchange files; empty means the system temp directory.
  std::filesystem::path exchange_dir;
  std::chrono::seconds timeout{600};

  /// Throws ConfigError (naming `field`) when a placeholder is missing or the
  /// timeout is not positive.
  void Validate(const std::string& field) const;
};

struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;
  /// Combined stdout and stderr, truncated to the last 64 KiB.
  std::string output;
};

/// Runs `command` through /bin/sh. The whole process group is killed when the
/// timeout expires.
CommandResult RunShellCommand(const std::string& command,
                              std::chrono::milliseconds timeout);

/// POSIX single-quote escaping.
std::string ShellQuote(std::string_view text);

/// Replaces each `{name}` in `tmpl` by the shell-quoted value.
std::string ExpandPlaceholders(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& values);

/// Writes `input` as float-32 WAV, runs the command, and reads back the output
/// WAV. Throws ExternalError on non-zero exit or timeout and ContractError when
/// the output length or rate differs from the input. Exchange filenames carry a
/// hash of `source_uri` plus a process-wide sequence number, so concurrent
/// calls never collide.
AudioBuffer RunAudioExchange(const AudioBuffer& input, const ExternalCommand& cmd,
                             std::string_view source_uri, std::string_view tag);

}  // namespace speechcur

#endif  // SPEECHCUR_EXTERNAL_H_
