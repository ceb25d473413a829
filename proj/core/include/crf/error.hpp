// Copyright 2026 The crf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace crf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or incompatible field shapes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration file. Carries the offending line (0 if none).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Snapshot or CSV file that does not match the expected layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a monitored norm above the blow-up threshold.
class BlowUp : public Error {
 public:
  using Error::Error;
};

/// Picard iteration on the stress diverged.
class PicardFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace crf
