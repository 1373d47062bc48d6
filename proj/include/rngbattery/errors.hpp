// Copyright 2026 The rngbattery Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNGBATTERY_ERRORS_HPP_
#define RNGBATTERY_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rngbattery {

enum class ErrorCode {
  kInvalidParams,
  kDegenerateSeed,
  kSinkError,
  kEmptySource,
  kIoError,
  kBadHeader,
  kValueOutOfRange,
  kBadInput,
  kDomainError,
  kTooFewSamples,
  kStreamExhausted,
  kDegenerateInput,
  kUsageError,
};

constexpr std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kDegenerateSeed: return "DegenerateSeed";
    case ErrorCode::kSinkError: return "SinkError";
    case ErrorCode::kEmptySource: return "EmptySource";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::kBadInput: return "BadInput";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kStreamExhausted: return "StreamExhausted";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kUsageError: return "UsageError";
  }
  return "Unknown";
}

// All recoverable failures in the library are reported with this type; the
// code lets callers map them onto exit statuses without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rngbattery

#endif  // RNGBATTERY_ERRORS_HPP_
