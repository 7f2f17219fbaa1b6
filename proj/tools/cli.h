// tools/cli.h

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

#ifndef SPEECHCUR_TOOLS_CLI_H_
#define SPEECHCUR_TOOLS_CLI_H_

#include <filesystem>
#include <string>
#include <vector>

namespace speechcur::cli {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitEmptyCorpus = 3,
};

/// Entry point of the speechcur tool; returns the process exit status.
int RunCli(const std::vector<std::string>& args);
int RunCli(int argc, char** argv);

/// Expands --corpus arguments: directories contribute their *.wav files,
/// patterns with wildcards are globbed, anything else is taken literally (a
/// missing literal path becomes a failure record later). Result is sorted and
/// free of duplicates.
std::vector<std::filesystem::path> ExpandCorpus(const std::vector<std::string>& specs);

}  // namespace speechcur::cli

#endif  // SPEECHCUR_TOOLS_CLI_H_
