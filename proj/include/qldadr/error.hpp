// Copyright 2026 The QLDADR Authors
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

namespace qldadr {

/// Base of every error raised by the library. Subclasses map onto distinct
/// CLI exit codes; `stage` is filled in by the pipeline orchestration so a
/// failure can be traced to the step that raised it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}

  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) {
    if (stage_.empty()) stage_ = std::move(stage);
  }

  virtual int exit_code() const noexcept { return 1; }

 private:
  std::string stage_;
};

/// Invalid configuration, including the Q <= L bit-width constraint.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Malformed or degenerate input data.
class DataError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Violated numerical preconditions (asymmetry, indefiniteness, null branches).
class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// Inconsistent quantum pipeline state (branch ambiguity, entangled discard).
class PipelineError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

}  // namespace qldadr
