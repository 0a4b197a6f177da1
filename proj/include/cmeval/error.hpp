// Copyright 2026 The cmeval Authors
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
#include <string_view>

namespace cmeval {

enum class ErrorCode {
  InvalidInput,
  EmptyMatrix,
  DegenerateWeights,
  DegenerateChance,
  TooFewClasses,
  PerfectClassification,
  NoConvergence,
  NotComparable,
  InsufficientData,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DegenerateWeights: return "DegenerateWeights";
    case ErrorCode::DegenerateChance: return "DegenerateChance";
    case ErrorCode::TooFewClasses: return "TooFewClasses";
    case ErrorCode::PerfectClassification: return "PerfectClassification";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::InsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

// Every library failure is reported through this type; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// IPF ran out of iterations; the last residual is kept for diagnostics.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(double residual, int iterations)
      : Error(ErrorCode::NoConvergence,
              "quasi-independence fit did not converge after " +
                  std::to_string(iterations) +
                  " iterations (residual=" + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace cmeval
