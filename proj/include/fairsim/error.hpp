// Copyright 2026 The FairSim Authors.
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

#ifndef FAIRSIM_ERROR_HPP_
#define FAIRSIM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairsim {

enum class ErrorKind {
  kInvalidConfig,
  kDimensionMismatch,
  kOutOfRange,
  kSingular,
  kUndefined,
  kIo,
};

inline const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidConfig: return "invalid-config";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kOutOfRange: return "out-of-range";
    case ErrorKind::kSingular: return "singular";
    case ErrorKind::kUndefined: return "undefined";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

// All library failures are reported through this type; `kind()` lets
// callers (the experiment harness, the CLI) classify without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void Require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace fairsim

#endif  // FAIRSIM_ERROR_HPP_
