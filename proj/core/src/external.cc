// external.cc

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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <string>
#include <thread>

#include <spdlog/spdlog.h>

#include "speechcur/external.h"
#include "speechcur/hash.h"

namespace speechcur {

namespace {

constexpr std::size_t kMaxCapturedOutput = 64 * 1024;

std::atomic<unsigned long long> g_exchange_sequence{0};

void RemoveQuietly(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::remove(p, ec);
}

}  // namespace

void ExternalCommand::Validate(const std::string& field) const {
  if (command_template.find("{input}") == std::string::npos ||
      command_template.find("{output}") == std::string::npos) {
    throw ConfigError(field + ".command",
                      "template must contain {input} and {output}");
  }
  if (timeout.count() <= 0) {
    throw ConfigError(field + ".timeout_s", "must be positive");
  }
}

std::string ShellQuote(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string ExpandPlaceholders(
    std::string_view tmpl,
    const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out(tmpl);
  for (const auto& [name, value] : values) {
    const std::string key = "{" + name + "}";
    const std::string quoted = ShellQuote(value);
    for (std::size_t pos = out.find(key); pos != std::string::npos;
         pos = out.find(key, pos + quoted.size())) {
      out.replace(pos, key.size(), quoted);
    }
  }
  return out;
}

CommandResult RunShellCommand(const std::string& command,
                              std::chrono::milliseconds timeout) {
  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) {
    throw ExternalError(std::string("pipe failed: ") + std::strerror(errno), -1, "");
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw ExternalError(std::string("fork failed: ") + std::strerror(errno), -1, "");
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);

  CommandResult result;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  bool open = true;
  char chunk[4096];
  while (open) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining.count(), 1000)));
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const ssize_t n = read(fds[0], chunk, sizeof(chunk));
    if (n > 0) {
      result.output.append(chunk, static_cast<std::size_t>(n));
      if (result.output.size() > kMaxCapturedOutput) {
        result.output.erase(0, result.output.size() - kMaxCapturedOutput);
      }
    } else if (n == 0 || errno != EINTR) {
      open = false;
    }
  }
  close(fds[0]);

  int status = 0;
  while (!result.timed_out) {
    const pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      result.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (result.timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
    return result;
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

AudioBuffer RunAudioExchange(const AudioBuffer& input, const ExternalCommand& cmd,
                             std::string_view source_uri, std::string_view tag) {
  const std::filesystem::path dir = cmd.exchange_dir.empty()
                                        ? std::filesystem::temp_directory_path()
                                        : cmd.exchange_dir;
  std::filesystem::create_directories(dir);
  const std::string stem = Sha256Hex(source_uri).substr(0, 16) + "_off0_" +
                           std::to_string(getpid()) + "_" +
                           std::to_string(g_exchange_sequence.fetch_add(1)) + "_" +
                           std::string(tag);
  const auto in_path = dir / (stem + "_in.wav");
  const auto out_path = dir / (stem + "_out.wav");

  struct Cleanup {
    std::filesystem::path a, b;
    ~Cleanup() {
      RemoveQuietly(a);
      RemoveQuietly(b);
    }
  } cleanup{in_path, out_path};

  WriteWav(in_path, input, SampleFormat::kFloat32);
  const std::string command = ExpandPlaceholders(
      cmd.command_template, {{"input", in_path.string()}, {"output", out_path.string()}});
  spdlog::debug("external {}: {}", tag, command);
  const CommandResult run = RunShellCommand(
      command, std::chrono::duration_cast<std::chrono::milliseconds>(cmd.timeout));
  const std::string where = std::string(tag) + " for '" + std::string(source_uri) + "'";
  if (run.timed_out) {
    throw ExternalError("external " + where + " timed out after " +
                            std::to_string(cmd.timeout.count()) + " s",
                        -1, run.output);
  }
  if (run.exit_code != 0) {
    throw ExternalError("external " + where + " exited with code " +
                            std::to_string(run.exit_code) +
                            (run.output.empty() ? "" : ": " + run.output),
                        run.exit_code, run.output);
  }
  AudioBuffer out;
  try {
    out = ReadWav(out_path);
  } catch (const Error& e) {
    throw ExternalError("external " + where + " produced unreadable output: " + e.what(),
                        0, run.output);
  }
  if (out.size() != input.size()) {
    throw ContractError("external " + where + " returned " + std::to_string(out.size()) +
                        " samples, expected " + std::to_string(input.size()));
  }
  if (out.sample_rate != input.sample_rate) {
    throw ContractError("external " + where + " returned sample rate " +
                        std::to_string(out.sample_rate) + ", expected " +
                        std::to_string(input.sample_rate));
  }
  return out;
}

}  // namespace speechcur
