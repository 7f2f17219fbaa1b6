// speechcur/error.h

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

#ifndef SPEECHCUR_ERROR_H_
#define SPEECHCUR_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace speechcur {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input bytes do not follow the expected container or record layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A configuration field is missing, out of range, or inconsistent.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A backend or caller broke an interface contract (length, rate, shape).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An external command failed, timed out, or produced unusable output.
class ExternalError : public Error {
 public:
  ExternalError(const std::string& what, int exit_code, std::string diagnostics)
      : Error(what), exit_code_(exit_code), diagnostics_(std::move(diagnostics)) {}
  int exit_code() const { return exit_code_; }
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  int exit_code_;
  std::string diagnostics_;
};

}  // namespace speechcur

#endif  // SPEECHCUR_ERROR_H_
