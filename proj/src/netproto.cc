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

#include "lutpsi/netproto.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "lutpsi/error.h"
#include "lutpsi/wire.h"

namespace lutpsi {
namespace {

constexpr uint8_t kMagic[4] = {'L', 'P', 'S', 'I'};
constexpr uint64_t kMaxPayload = uint64_t{1} << 34;

bool KnownType(uint8_t t) { return t >= 0x01 && t <= 0x05; }

uint64_t LoadU64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

void StoreU64(uint64_t v, std::vector<uint8_t>& out) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

// Validates the fixed header and returns (type, payload length).
std::pair<MessageType, uint64_t> ParseHeader(const uint8_t* h) {
  if (std::memcmp(h, kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "frame does not start with LPSI");
  }
  if (h[4] != kWireVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "wire version " + std::to_string(h[4]));
  }
  if (!KnownType(h[5])) {
    throw Error(ErrorCode::kUnknownMessageType,
                "message type " + std::to_string(h[5]));
  }
  return {static_cast<MessageType>(h[5]), LoadU64(h + 6)};
}

}  // namespace

const char* MessageTypeName(MessageType t) {
  switch (t) {
    case MessageType::kKeyMaterial: return "KEY_MATERIAL";
    case MessageType::kQuery: return "QUERY";
    case MessageType::kReply: return "REPLY";
    case MessageType::kError: return "ERROR";
    case MessageType::kParams: return "PARAMS";
  }
  return "UNKNOWN";
}

uint64_t Fnv1a64(std::span<const uint8_t> data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<uint8_t> EncodeFrame(const Frame& frame) {
  std::vector<uint8_t> out(kMagic, kMagic + 4);
  out.reserve(kFrameHeaderBytes + frame.payload.size() + kFrameTrailerBytes);
  out.push_back(kWireVersion);
  out.push_back(static_cast<uint8_t>(frame.type));
  StoreU64(frame.payload.size(), out);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  StoreU64(Fnv1a64(frame.payload), out);
  return out;
}

Frame DecodeFrame(std::span<const uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderBytes) {
    throw Error(ErrorCode::kTruncated, "frame shorter than its header");
  }
  auto [type, len] = ParseHeader(bytes.data());
  const uint64_t body = bytes.size() - kFrameHeaderBytes;
  if (len > body || body - len < kFrameTrailerBytes) {
    throw Error(ErrorCode::kTruncated, "frame shorter than its length field");
  }
  if (body - len > kFrameTrailerBytes) {
    throw Error(ErrorCode::kMalformedPayload, "bytes after frame trailer");
  }
  Frame frame;
  frame.type = type;
  auto payload = bytes.subspan(kFrameHeaderBytes, len);
  if (Fnv1a64(payload) != LoadU64(bytes.data() + kFrameHeaderBytes + len)) {
    throw Error(ErrorCode::kChecksumMismatch, "payload checksum mismatch");
  }
  frame.payload.assign(payload.begin(), payload.end());
  return frame;
}

void WriteFrame(Transport& t, const Frame& frame) {
  t.Write(EncodeFrame(frame));
}

Frame ReadFrame(Transport& t) {
  uint8_t header[kFrameHeaderBytes];
  t.ReadExact(header);
  auto [type, len] = ParseHeader(header);
  if (len > kMaxPayload) {
    throw Error(ErrorCode::kMalformedPayload,
                "payload length " + std::to_string(len));
  }
  Frame frame;
  frame.type = type;
  frame.payload.resize(len);
  t.ReadExact(frame.payload);
  uint8_t trailer[kFrameTrailerBytes];
  t.ReadExact(trailer);
  if (Fnv1a64(frame.payload) != LoadU64(trailer)) {
    throw Error(ErrorCode::kChecksumMismatch, "payload checksum mismatch");
  }
  return frame;
}

// ---- In-memory pipe ---------------------------------------------------------

namespace {

struct Channel {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<uint8_t> bytes;
  bool closed = false;
};

class PipeEnd : public Transport {
 public:
  PipeEnd(std::shared_ptr<Channel> in, std::shared_ptr<Channel> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~PipeEnd() override { Close(); }

  void Write(std::span<const uint8_t> data) override {
    std::lock_guard<std::mutex> lock(out_->mu);
    if (out_->closed) throw Error(ErrorCode::kIo, "pipe closed");
    out_->bytes.insert(out_->bytes.end(), data.begin(), data.end());
    out_->cv.notify_all();
  }

  void ReadExact(std::span<uint8_t> out) override {
    std::unique_lock<std::mutex> lock(in_->mu);
    size_t done = 0;
    while (done < out.size()) {
      if (!in_->cv.wait_for(lock, timeout_, [&] {
            return !in_->bytes.empty() || in_->closed;
          })) {
        throw Error(ErrorCode::kTimeout, "pipe read timed out");
      }
      if (in_->bytes.empty()) throw Error(ErrorCode::kIo, "peer closed");
      const size_t n = std::min(out.size() - done, in_->bytes.size());
      std::copy_n(in_->bytes.begin(), n, out.begin() + done);
      in_->bytes.erase(in_->bytes.begin(), in_->bytes.begin() + n);
      done += n;
    }
  }

  void Close() override {
    for (Channel* c : {in_.get(), out_.get()}) {
      std::lock_guard<std::mutex> lock(c->mu);
      c->closed = true;
      c->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Channel> in_;
  std::shared_ptr<Channel> out_;
};

}  // namespace

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> MakePipe() {
  auto a = std::make_shared<Channel>();
  auto b = std::make_shared<Channel>();
  return {std::make_unique<PipeEnd>(a, b), std::make_unique<PipeEnd>(b, a)};
}

void RecordingTransport::Write(std::span<const uint8_t> data) {
  sent_.insert(sent_.end(), data.begin(), data.end());
  inner_.Write(data);
}

void RecordingTransport::ReadExact(std::span<uint8_t> out) {
  inner_.ReadExact(out);
  received_.insert(received_.end(), out.begin(), out.end());
}

// ---- TCP --------------------------------------------------------------------

namespace {

std::string ErrnoText() { return std::strerror(errno); }

class SocketTransport : public Transport {
 public:
  explicit SocketTransport(int fd) : fd_(fd) {
    int one = 1;
    setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~SocketTransport() override { Close(); }

  void Write(std::span<const uint8_t> data) override {
    size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = send(fd_, data.data() + done, data.size() - done,
                             MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::kIo, "send: " + ErrnoText());
      }
      done += static_cast<size_t>(n);
    }
  }

  void ReadExact(std::span<uint8_t> out) override {
    size_t done = 0;
    while (done < out.size()) {
      pollfd p{fd_, POLLIN, 0};
      const int ready = poll(&p, 1, static_cast<int>(timeout_.count()));
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::kIo, "poll: " + ErrnoText());
      }
      if (ready == 0) throw Error(ErrorCode::kTimeout, "socket read timed out");
      const ssize_t n = recv(fd_, out.data() + done, out.size() - done, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::kIo, "recv: " + ErrnoText());
      }
      if (n == 0) throw Error(ErrorCode::kIo, "peer closed");
      done += static_cast<size_t>(n);
    }
  }

  void Close() override {
    if (fd_ >= 0) {
      shutdown(fd_, SHUT_RDWR);
      close(fd_);
      fd_ = -1;
    }
  }

 private:
  int fd_;
};

addrinfo* Resolve(const std::string& host, uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(),
                             service.c_str(), &hints, &res);
  if (rc != 0) {
    throw Error(ErrorCode::kIo,
                "cannot resolve " + host + ": " + gai_strerror(rc));
  }
  return res;
}

}  // namespace

TcpListener::TcpListener(const std::string& host, uint16_t port) {
  addrinfo* res = Resolve(host, port, true);
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && listen(fd, 16) == 0) {
      fd_ = fd;
      break;
    }
    close(fd);
  }
  freeaddrinfo(res);
  if (fd_ < 0) {
    throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" +
                                    std::to_string(port) + ": " + ErrnoText());
  }
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  if (addr.ss_family == AF_INET) {
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  } else {
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  }
}

TcpListener::~TcpListener() {
  Shutdown();
  if (fd_ >= 0) close(fd_);
}

void TcpListener::Shutdown() { closed_ = true; }

std::unique_ptr<Transport> TcpListener::Accept() {
  while (!closed_) {
    pollfd p{fd_, POLLIN, 0};
    const int ready = poll(&p, 1, 200);
    if (ready < 0 && errno != EINTR) {
      throw Error(ErrorCode::kIo, "poll: " + ErrnoText());
    }
    if (ready <= 0) continue;
    const int fd = accept(fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR || errno == EAGAIN || errno == ECONNABORTED) continue;
      throw Error(ErrorCode::kIo, "accept: " + ErrnoText());
    }
    return std::make_unique<SocketTransport>(fd);
  }
  return nullptr;
}

std::unique_ptr<Transport> TcpConnect(const std::string& host, uint16_t port,
                                      std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::string last_error = "no address";
  // The listener may not be up yet; retry until the deadline.
  do {
    addrinfo* res = Resolve(host, port, false);
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
      const int fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        freeaddrinfo(res);
        auto t = std::make_unique<SocketTransport>(fd);
        t->set_timeout(timeout);
        return t;
      }
      last_error = ErrnoText();
      close(fd);
    }
    freeaddrinfo(res);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  } while (std::chrono::steady_clock::now() < deadline);
  throw Error(ErrorCode::kIo, "cannot connect to " + host + ":" +
                                  std::to_string(port) + ": " + last_error);
}

std::pair<std::string, uint16_t> ParseEndpoint(const std::string& endpoint) {
  const size_t colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon + 1 == endpoint.size()) {
    throw Error(ErrorCode::kOutOfRange, "expected HOST:PORT, got " + endpoint);
  }
  std::string host = endpoint.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  const std::string port_text = endpoint.substr(colon + 1);
  unsigned long port = 0;
  for (char c : port_text) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kOutOfRange, "bad port in " + endpoint);
    }
    port = port * 10 + static_cast<unsigned long>(c - '0');
    if (port > 65535) {
      throw Error(ErrorCode::kOutOfRange, "bad port in " + endpoint);
    }
  }
  return {host, static_cast<uint16_t>(port)};
}

// ---- Sessions ---------------------------------------------------------------

namespace {

struct Handshake {
  ParameterSet params;
  uint64_t b = 0;
  uint64_t k = 0;
  uint64_t hash_key = 0;
  uint64_t queries = 0;
};

std::vector<uint8_t> EncodeHandshake(const Handshake& h) {
  ByteWriter w;
  WriteParams(w, h.params);
  w.U32(static_cast<uint32_t>(h.b));
  w.U32(static_cast<uint32_t>(h.k));
  w.U64(h.hash_key);
  w.U64(h.queries);
  return w.Take();
}

Handshake DecodeHandshake(std::span<const uint8_t> payload) {
  ByteReader r(payload);
  Handshake h;
  h.params = ReadParams(r);
  h.b = r.U32();
  h.k = r.U32();
  h.hash_key = r.U64();
  h.queries = r.U64();
  r.ExpectEnd();
  return h;
}

// Parameter sets are compared by value; names are labels only.
bool SameParams(ParameterSet a, ParameterSet b) {
  a.name.clear();
  b.name.clear();
  return a == b;
}

Frame ErrorFrame(WireErrorCode code, const std::string& message) {
  ByteWriter w;
  w.U8(static_cast<uint8_t>(code));
  w.Str(message);
  return Frame{MessageType::kError, w.Take()};
}

[[noreturn]] void ThrowRemote(const Frame& frame) {
  ByteReader r(frame.payload);
  const uint8_t code = r.U8();
  const std::string message = r.Str();
  throw Error(code == static_cast<uint8_t>(WireErrorCode::kParamsMismatch)
                  ? ErrorCode::kHandshakeMismatch
                  : ErrorCode::kRemoteError,
              "peer error " + std::to_string(code) + ": " + message);
}

Frame Expect(Transport& t, MessageType type) {
  Frame frame = ReadFrame(t);
  if (frame.type == MessageType::kError && type != MessageType::kError) {
    ThrowRemote(frame);
  }
  if (frame.type != type) {
    throw Error(ErrorCode::kProtocolViolation,
                std::string("expected ") + MessageTypeName(type) + ", got " +
                    MessageTypeName(frame.type));
  }
  return frame;
}

std::string Describe(const ParameterSet& p, uint64_t b, uint64_t k) {
  return "(" + p.name + ", N=" + std::to_string(p.ring_dim) +
         ", b=" + std::to_string(b) + ", k=" + std::to_string(k) + ")";
}

WireErrorCode WireCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kHandshakeMismatch: return WireErrorCode::kParamsMismatch;
    case ErrorCode::kProtocolViolation: return WireErrorCode::kProtocol;
    case ErrorCode::kTruncated:
    case ErrorCode::kMalformedPayload:
    case ErrorCode::kChecksumMismatch:
    case ErrorCode::kBadMagic:
    case ErrorCode::kVersionMismatch:
    case ErrorCode::kUnknownMessageType:
    case ErrorCode::kIncompatibleParams:
      return WireErrorCode::kMalformed;
    default: return WireErrorCode::kInternal;
  }
}

SessionSummary ServeSessionImpl(Transport& t, const SenderContext& ctx) {
  SessionSummary summary;
  const Handshake hello =
      DecodeHandshake(Expect(t, MessageType::kParams).payload);
  const PsiConfig& want = ctx.config;
  if (!SameParams(hello.params, want.params) || hello.b != want.b ||
      hello.k != want.k) {
    throw Error(ErrorCode::kHandshakeMismatch,
                "receiver parameters " +
                    Describe(hello.params, hello.b, hello.k) +
                    " differ from sender " +
                    Describe(want.params, want.b, want.k));
  }
  ValidatePsiConfig(ctx.config);
  WriteFrame(t, Frame{MessageType::kParams, EncodeHandshake(hello)});

  const uint64_t modulus = ctx.config.params.ring_modulus;
  const Frame km_frame = Expect(t, MessageType::kKeyMaterial);
  summary.key_material_bytes = km_frame.payload.size();
  ByteReader km_reader(km_frame.payload);
  uint64_t km_modulus = 0;
  const SenderKeyMaterial km = ReadSenderKeyMaterial(km_reader, &km_modulus);
  km_reader.ExpectEnd();
  if (km_modulus != modulus) {
    throw Error(ErrorCode::kIncompatibleParams, "key material modulus");
  }

  const PsiSender sender(ctx.config, ctx.set, hello.hash_key);
  for (uint64_t n = 0; n < hello.queries; ++n) {
    const Frame qf = Expect(t, MessageType::kQuery);
    summary.query_bytes += qf.payload.size();
    ByteReader r(qf.payload);
    const uint64_t seq = r.U64();
    uint64_t q_modulus = 0;
    const PsiQuery query = ReadPsiQuery(r, &q_modulus);
    r.ExpectEnd();
    if (seq != n) {
      throw Error(ErrorCode::kProtocolViolation, "query out of sequence");
    }
    if (q_modulus != modulus) {
      throw Error(ErrorCode::kIncompatibleParams, "query modulus");
    }
    const PsiReply reply = sender.Answer(query, km);
    ByteWriter w;
    w.U64(seq);
    WritePsiReply(w, reply);
    Frame rf{MessageType::kReply, w.Take()};
    summary.reply_bytes += rf.payload.size();
    WriteFrame(t, rf);
    ++summary.queries;
  }
  return summary;
}

}  // namespace

SessionSummary ServeSession(Transport& t, const SenderContext& ctx) {
  try {
    return ServeSessionImpl(t, ctx);
  } catch (const Error& e) {
    const ErrorCode code = e.code();
    if (code != ErrorCode::kIo && code != ErrorCode::kTimeout &&
        code != ErrorCode::kRemoteError) {
      try {
        WriteFrame(t, ErrorFrame(WireCodeFor(code), e.what()));
      } catch (const Error&) {
        // The peer is gone; the original error is the one to report.
      }
    }
    t.Close();
    throw;
  }
}

std::vector<uint64_t> ReceiverSession(Transport& t,
                                      std::span<const uint64_t> set,
                                      const PsiConfig& config, uint64_t seed,
                                      SessionSummary* summary) {
  PsiReceiver receiver(config, set, seed);
  SessionSummary local;
  Handshake hello;
  hello.params = config.params;
  hello.b = config.b;
  hello.k = config.k;
  hello.hash_key = receiver.hash_key();
  hello.queries = receiver.query_count();
  WriteFrame(t, Frame{MessageType::kParams, EncodeHandshake(hello)});
  const Handshake ack =
      DecodeHandshake(Expect(t, MessageType::kParams).payload);
  if (!SameParams(ack.params, config.params) ||
      ack.hash_key != hello.hash_key || ack.queries != hello.queries) {
    throw Error(ErrorCode::kHandshakeMismatch,
                "sender acknowledged different parameters");
  }

  const uint64_t modulus = config.params.ring_modulus;
  ByteWriter kw;
  WriteSenderKeyMaterial(kw, receiver.key_material(), modulus);
  Frame km{MessageType::kKeyMaterial, kw.Take()};
  local.key_material_bytes = km.payload.size();
  WriteFrame(t, km);

  for (size_t n = 0; n < receiver.query_count(); ++n) {
    ByteWriter qw;
    qw.U64(n);
    WritePsiQuery(qw, receiver.MakeQuery(n), modulus);
    Frame qf{MessageType::kQuery, qw.Take()};
    local.query_bytes += qf.payload.size();
    WriteFrame(t, qf);

    const Frame rf = Expect(t, MessageType::kReply);
    local.reply_bytes += rf.payload.size();
    ByteReader r(rf.payload);
    const uint64_t seq = r.U64();
    const PsiReply reply = ReadPsiReply(r);
    r.ExpectEnd();
    if (seq != n) {
      throw Error(ErrorCode::kProtocolViolation, "reply out of sequence");
    }
    receiver.Consume(n, reply);
    ++local.queries;
  }
  if (summary != nullptr) *summary = local;
  return receiver.Result();
}

void ServeForever(TcpListener& listener, const SenderContext& ctx,
                  size_t max_sessions,
                  const std::function<void(const std::string&)>& log) {
  std::vector<std::thread> sessions;
  std::mutex log_mu;
  auto report = [&](const std::string& line) {
    if (!log) return;
    std::lock_guard<std::mutex> lock(log_mu);
    log(line);
  };
  size_t served = 0;
  while (max_sessions == 0 || served < max_sessions) {
    std::unique_ptr<Transport> conn = listener.Accept();
    if (conn == nullptr) break;
    conn->set_timeout(ctx.timeout);
    const size_t id = ++served;
    sessions.emplace_back([&ctx, &report, id, c = std::move(conn)]() mutable {
      try {
        const SessionSummary s = ServeSession(*c, ctx);
        report("session " + std::to_string(id) + ": " +
               std::to_string(s.queries) + " queries, key material " +
               std::to_string(s.key_material_bytes) + " bytes");
      } catch (const std::exception& e) {
        report("session " + std::to_string(id) + " failed: " + e.what());
      }
    });
  }
  for (std::thread& s : sessions) s.join();
}

}  // namespace lutpsi
