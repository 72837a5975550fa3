/*
 * Copyright 2026 The lutpsi Authors.
 *
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

#ifndef LUTPSI_ERROR_H_
#define LUTPSI_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lutpsi {

// Every failure raised by the library carries one of these codes. Parameter
// validation uses one code per violated invariant.
enum class ErrorCode {
  kNotFound,
  kNotPowerOfTwo,
  kNttUnfriendly,
  kModulusTooLarge,
  kLweModulusInvalid,
  kPlaintextModulusInvalid,
  kGadgetBaseInvalid,
  kDecompositionBaseInvalid,
  kInvalidSigma,
  kInvalidDimension,
  kInvalidSubstitution,
  kOutOfRange,
  kIncompatibleParams,
  kNotSupported,
  kKeyNotFound,
  kCollision,
  kReservedElement,
  kTruncated,
  kChecksumMismatch,
  kVersionMismatch,
  kBadMagic,
  kUnknownMessageType,
  kMalformedPayload,
  kHandshakeMismatch,
  kProtocolViolation,
  kTimeout,
  kIo,
  kRemoteError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lutpsi

#endif  // LUTPSI_ERROR_H_
