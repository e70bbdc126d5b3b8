// Copyright 2026 The Factlink Authors.
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

#ifndef FACTLINK_STATUS_H_
#define FACTLINK_STATUS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace factlink {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kMalformedRecord,
  kDuplicateId,
  kDanglingFactReference,
  kUnknownId,
  kMissingContext,
  kMissingVector,
  kDimensionMismatch,
  kEmptyTrainingSet,
  kEmptyKeySet,
  kEmptyEvaluation,
  kNumericFailure,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported as Error. The code lets callers (and the
// CLI exit-code mapping) distinguish data problems from numeric ones.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDanglingFactReference: return "DanglingFactReference";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kMissingContext: return "MissingContext";
    case ErrorCode::kMissingVector: return "MissingVector";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kEmptyKeySet: return "EmptyKeySet";
    case ErrorCode::kEmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::kNumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

}  // namespace factlink

#endif  // FACTLINK_STATUS_H_
