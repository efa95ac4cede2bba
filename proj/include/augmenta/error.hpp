//
// Copyright 2026 The Augmenta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef AUGMENTA_ERROR_HPP_
#define AUGMENTA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace augmenta {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kConfig,
  // datamodel
  kMalformedRecord,
  kMissingCandidates,
  kDuplicateTaskName,
  kInsufficientExamples,
  // backends
  kTransport,
  kProtocol,
  kBudget,
  kUnsupported,
  // augmenters
  kEmptyResponse,
  kRefusalDetected,
  kAllExamplesFailed,
  // instructgen
  kBackendExhausted,
  // selector
  kDimMismatch,
  kDegenerateBatch,
  kInsufficientRewards,
  kNonFiniteLoss,
  kNoRecords,
  // evalharness / report
  kLengthMismatch,
  kEmptyGroup,
  kNoResults,
  kAllSeedsFailed,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kMissingCandidates: return "MissingCandidates";
    case ErrorCode::kDuplicateTaskName: return "DuplicateTaskName";
    case ErrorCode::kInsufficientExamples: return "InsufficientExamples";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kProtocol: return "Protocol";
    case ErrorCode::kBudget: return "Budget";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kEmptyResponse: return "EmptyResponse";
    case ErrorCode::kRefusalDetected: return "RefusalDetected";
    case ErrorCode::kAllExamplesFailed: return "AllExamplesFailed";
    case ErrorCode::kBackendExhausted: return "BackendExhausted";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kDegenerateBatch: return "DegenerateBatch";
    case ErrorCode::kInsufficientRewards: return "InsufficientRewards";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kNoRecords: return "NoRecords";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyGroup: return "EmptyGroup";
    case ErrorCode::kNoResults: return "NoResults";
    case ErrorCode::kAllSeedsFailed: return "AllSeedsFailed";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace augmenta

#endif  // AUGMENTA_ERROR_HPP_
