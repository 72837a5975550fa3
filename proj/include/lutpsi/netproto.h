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

// Framed request/reply protocol between the PSI Receiver and Sender.
//
// Frame layout:
//   "LPSI" | version (u8) | type (u8) | payload length (u64 LE) | payload |
//   FNV-1a-64 of the payload (u64 LE)
//
// Session: the Receiver sends PARAMS, the Sender answers with PARAMS (or an
// ERROR frame and closes), the Receiver sends KEY_MATERIAL, then each QUERY
// is answered by one REPLY.

#ifndef LUTPSI_NETPROTO_H_
#define LUTPSI_NETPROTO_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lutpsi/psi.h"

namespace lutpsi {

inline constexpr uint8_t kWireVersion = 1;
inline constexpr size_t kFrameHeaderBytes = 14;
inline constexpr size_t kFrameTrailerBytes = 8;

enum class MessageType : uint8_t {
  kKeyMaterial = 0x01,
  kQuery = 0x02,
  kReply = 0x03,
  kError = 0x04,
  kParams = 0x05,
};

const char* MessageTypeName(MessageType t);

// Codes carried by ERROR frames.
enum class WireErrorCode : uint8_t {
  kParamsMismatch = 0x01,
  kProtocol = 0x02,
  kMalformed = 0x03,
  kInternal = 0x04,
};

uint64_t Fnv1a64(std::span<const uint8_t> data);

struct Frame {
  MessageType type = MessageType::kError;
  std::vector<uint8_t> payload;
};

std::vector<uint8_t> EncodeFrame(const Frame& frame);
// Throws kBadMagic, kVersionMismatch, kUnknownMessageType, kTruncated,
// kChecksumMismatch or kMalformedPayload (trailing bytes).
Frame DecodeFrame(std::span<const uint8_t> bytes);

// A reliable byte stream.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void Write(std::span<const uint8_t> data) = 0;
  // Fills `out` completely. Throws kIo on a closed peer and kTimeout when
  // the configured timeout expires.
  virtual void ReadExact(std::span<uint8_t> out) = 0;
  virtual void Close() = 0;
  void set_timeout(std::chrono::milliseconds t) { timeout_ = t; }
  std::chrono::milliseconds timeout() const { return timeout_; }

 protected:
  std::chrono::milliseconds timeout_{60000};
};

void WriteFrame(Transport& t, const Frame& frame);
Frame ReadFrame(Transport& t);

// Two connected in-memory endpoints.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> MakePipe();

// Wraps a transport and keeps a copy of every byte sent and received.
class RecordingTransport : public Transport {
 public:
  explicit RecordingTransport(Transport& inner) : inner_(inner) {}
  void Write(std::span<const uint8_t> data) override;
  void ReadExact(std::span<uint8_t> out) override;
  void Close() override { inner_.Close(); }

  const std::vector<uint8_t>& sent() const { return sent_; }
  const std::vector<uint8_t>& received() const { return received_; }

 private:
  Transport& inner_;
  std::vector<uint8_t> sent_;
  std::vector<uint8_t> received_;
};

// ---- TCP --------------------------------------------------------------------

class TcpListener {
 public:
  // Port 0 picks a free port. Throws kIo.
  TcpListener(const std::string& host, uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  uint16_t port() const { return port_; }
  // Blocks for a connection; returns null once Shutdown() was called.
  std::unique_ptr<Transport> Accept();
  void Shutdown();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
  std::atomic<bool> closed_{false};
};

// Retries until `timeout` expires, then throws kIo. The returned transport
// also uses `timeout` as its read timeout until set_timeout() is called.
std::unique_ptr<Transport> TcpConnect(const std::string& host, uint16_t port,
                                      std::chrono::milliseconds timeout);

// Splits "HOST:PORT"; an empty HOST means every interface. Throws kOutOfRange
// on malformed input.
std::pair<std::string, uint16_t> ParseEndpoint(const std::string& endpoint);

// ---- Sessions ---------------------------------------------------------------

struct SenderContext {
  PsiConfig config;
  std::vector<uint64_t> set;
  // Read timeout applied to accepted connections.
  std::chrono::milliseconds timeout{60000};
};

struct SessionSummary {
  size_t queries = 0;
  uint64_t key_material_bytes = 0;
  uint64_t query_bytes = 0;
  uint64_t reply_bytes = 0;
};

// Runs one Sender session to completion. Protocol errors are reported to the
// peer with an ERROR frame and rethrown.
SessionSummary ServeSession(Transport& t, const SenderContext& ctx);

// Runs one Receiver session and returns the sorted intersection. An ERROR
// frame from the peer throws kRemoteError (kHandshakeMismatch for a
// parameter mismatch).
std::vector<uint64_t> ReceiverSession(Transport& t,
                                      std::span<const uint64_t> set,
                                      const PsiConfig& config, uint64_t seed,
                                      SessionSummary* summary = nullptr);

// Accepts connections until the listener is shut down or `max_sessions`
// sessions were served (0 = unlimited), one thread per session. Session
// outcomes are reported through `log` when given.
void ServeForever(TcpListener& listener, const SenderContext& ctx,
                  size_t max_sessions = 0,
                  const std::function<void(const std::string&)>& log = {});

}  // namespace lutpsi

#endif  // LUTPSI_NETPROTO_H_
