/*
 * Copyright 2026 The CLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLE_ERROR_HPP_
#define CLE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cle {

enum class ErrorCode {
  kEmptyInstance,
  kSchemaMismatch,
  kOutOfRange,
  kDimensionMismatch,
  kSpecInvalid,
  kMissingContext,
  kLengthMismatch,
  kNotConverged,
  kDegenerate,
  kModelFailure,
  kProtocolError,
  kPeerExit,
  kTimeout,
  kSingleClass,
  kUnsupported,
  kPairGenerationFailed,
  kConfigError,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for errors raised while talking to a black-box model.
  bool is_model_failure() const noexcept {
    return code_ == ErrorCode::kModelFailure ||
           code_ == ErrorCode::kProtocolError ||
           code_ == ErrorCode::kPeerExit || code_ == ErrorCode::kTimeout;
  }

 private:
  ErrorCode code_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInstance: return "EmptyInstance";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kSpecInvalid: return "SpecInvalid";
    case ErrorCode::kMissingContext: return "MissingContext";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kModelFailure: return "ModelFailure";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kPeerExit: return "PeerExit";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kPairGenerationFailed: return "PairGenerationFailed";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace cle

#endif  // CLE_ERROR_HPP_
