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

#include "lutpsi/error.h"

namespace lutpsi {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kNotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::kNttUnfriendly: return "NttUnfriendly";
    case ErrorCode::kModulusTooLarge: return "ModulusTooLarge";
    case ErrorCode::kLweModulusInvalid: return "LweModulusInvalid";
    case ErrorCode::kPlaintextModulusInvalid: return "PlaintextModulusInvalid";
    case ErrorCode::kGadgetBaseInvalid: return "GadgetBaseInvalid";
    case ErrorCode::kDecompositionBaseInvalid:
      return "DecompositionBaseInvalid";
    case ErrorCode::kInvalidSigma: return "InvalidSigma";
    case ErrorCode::kInvalidDimension: return "InvalidDimension";
    case ErrorCode::kInvalidSubstitution: return "InvalidSubstitution";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kIncompatibleParams: return "IncompatibleParams";
    case ErrorCode::kNotSupported: return "NotSupported";
    case ErrorCode::kKeyNotFound: return "KeyNotFound";
    case ErrorCode::kCollision: return "CollisionError";
    case ErrorCode::kReservedElement: return "ReservedElement";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnknownMessageType: return "UnknownMessageType";
    case ErrorCode::kMalformedPayload: return "MalformedPayload";
    case ErrorCode::kHandshakeMismatch: return "HandshakeMismatch";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kRemoteError: return "RemoteError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace lutpsi
