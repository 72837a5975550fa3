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

// Shared helpers for the command-line tools.

#ifndef LUTPSI_TOOLS_CLI_COMMON_H_
#define LUTPSI_TOOLS_CLI_COMMON_H_

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lutpsi/error.h"

namespace lutpsi {

// Process exit codes, one per error class.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParams = 2,     // bad parameters or inputs
  kExitIo = 3,         // files, sockets
  kExitWire = 4,       // malformed or corrupted frames
  kExitHandshake = 5,  // peer rejected or mismatched parameters
  kExitProtocol = 6,   // unexpected message order, remote failure
  kExitTimeout = 7,
  kExitInternal = 8,
};

inline int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kTruncated:
    case ErrorCode::kChecksumMismatch:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kBadMagic:
    case ErrorCode::kUnknownMessageType:
    case ErrorCode::kMalformedPayload:
      return kExitWire;
    case ErrorCode::kHandshakeMismatch:
      return kExitHandshake;
    case ErrorCode::kProtocolViolation:
    case ErrorCode::kRemoteError:
      return kExitProtocol;
    case ErrorCode::kTimeout:
      return kExitTimeout;
    case ErrorCode::kKeyNotFound:
      return kExitInternal;
    default:
      return kExitParams;
  }
}

inline int ReportError(const Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  return ExitCodeFor(e.code());
}

// Newline-delimited unsigned decimal integers; blank lines are skipped.
inline std::vector<uint64_t> ReadSetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<uint64_t> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                             line.back() == '\t')) {
      line.pop_back();
    }
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    uint64_t v = 0;
    for (size_t i = start; i < line.size(); ++i) {
      const char c = line[i];
      if (c < '0' || c > '9' || v > (UINT64_MAX - (c - '0')) / 10) {
        throw Error(ErrorCode::kOutOfRange, path + ":" +
                                                std::to_string(line_no) +
                                                ": not an unsigned integer");
      }
      v = v * 10 + static_cast<uint64_t>(c - '0');
    }
    out.push_back(v);
  }
  return out;
}

inline void WriteSetFile(const std::string& path,
                         const std::vector<uint64_t>& values) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  for (uint64_t v : values) out << v << "\n";
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace lutpsi

#endif  // LUTPSI_TOOLS_CLI_COMMON_H_
