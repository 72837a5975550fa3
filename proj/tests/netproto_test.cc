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

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "lutpsi/error.h"
#include "lutpsi/params.h"
#include "lutpsi/psi.h"
#include "oracles.h"

namespace lutpsi {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kNotFound;
}

uint64_t FnvOracle(const std::vector<uint8_t>& data) {
  uint64_t h = 14695981039346656037ull;
  for (uint8_t c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<uint8_t> Bytes(const std::string& s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}

// Splits a byte stream into frames.
std::vector<Frame> SplitFrames(const std::vector<uint8_t>& stream) {
  std::vector<Frame> frames;
  size_t at = 0;
  while (at < stream.size()) {
    uint64_t len = 0;
    for (int i = 0; i < 8; ++i) {
      len |= uint64_t{stream[at + 6 + i]} << (8 * i);
    }
    const size_t total = kFrameHeaderBytes + len + kFrameTrailerBytes;
    frames.push_back(DecodeFrame(
        std::span<const uint8_t>(stream.data() + at, total)));
    at += total;
  }
  return frames;
}

std::vector<uint64_t> RandomSet(size_t size, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<uint64_t> s;
  while (s.size() < size) s.insert(rng() % (4096 - 256));
  return {s.begin(), s.end()};
}

PsiConfig SmallConfig() {
  PsiConfig c;
  c.params = PsiParams(256);
  c.b = 12;
  c.k = 8;
  return c;
}

TEST(FrameTest, FnvVectors) {
  EXPECT_EQ(Fnv1a64(Bytes("")), 0xcbf29ce484222325ull);
  EXPECT_EQ(Fnv1a64(Bytes("a")), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(Fnv1a64(Bytes("foobar")), 0x85944171f73967e8ull);
  std::mt19937_64 rng(1);
  std::vector<uint8_t> data(1000);
  for (uint8_t& b : data) b = static_cast<uint8_t>(rng());
  EXPECT_EQ(Fnv1a64(data), FnvOracle(data));
}

TEST(FrameTest, Layout) {
  const Frame f{MessageType::kQuery, {7, 8, 9}};
  const std::vector<uint8_t> bytes = EncodeFrame(f);
  ASSERT_EQ(bytes.size(), kFrameHeaderBytes + 3 + kFrameTrailerBytes);
  const std::vector<uint8_t> header = {'L', 'P', 'S', 'I', 1, 0x02,
                                       3, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
  EXPECT_EQ(bytes[14], 7);
  uint64_t trailer = 0;
  for (int i = 0; i < 8; ++i) trailer |= uint64_t{bytes[17 + i]} << (8 * i);
  EXPECT_EQ(trailer, FnvOracle({7, 8, 9}));
  const Frame back = DecodeFrame(bytes);
  EXPECT_EQ(back.type, MessageType::kQuery);
  EXPECT_EQ(back.payload, f.payload);
}

TEST(FrameTest, EachDefectHasItsOwnCode) {
  const std::vector<uint8_t> good =
      EncodeFrame(Frame{MessageType::kReply, {1, 2, 3, 4}});
  auto with = [&](size_t at, uint8_t v) {
    std::vector<uint8_t> b(good);
    b[at] = v;
    return b;
  };
  EXPECT_EQ(CodeOf([&] { DecodeFrame(with(0, 'X')); }), ErrorCode::kBadMagic);
  EXPECT_EQ(CodeOf([&] { DecodeFrame(with(4, 2)); }),
            ErrorCode::kVersionMismatch);
  EXPECT_EQ(CodeOf([&] { DecodeFrame(with(5, 0)); }),
            ErrorCode::kUnknownMessageType);
  EXPECT_EQ(CodeOf([&] { DecodeFrame(with(5, 6)); }),
            ErrorCode::kUnknownMessageType);
  EXPECT_EQ(CodeOf([&] { DecodeFrame(with(15, 0xff)); }),
            ErrorCode::kChecksumMismatch);
  EXPECT_EQ(CodeOf([&] {
              DecodeFrame(std::span<const uint8_t>(good.data(), 10));
            }),
            ErrorCode::kTruncated);
  EXPECT_EQ(CodeOf([&] {
              DecodeFrame(std::span<const uint8_t>(good.data(),
                                                   good.size() - 1));
            }),
            ErrorCode::kTruncated);
  std::vector<uint8_t> longer(good);
  longer.push_back(0);
  EXPECT_EQ(CodeOf([&] { DecodeFrame(longer); }),
            ErrorCode::kMalformedPayload);
}

TEST(PipeTest, FramesTimeoutAndClose) {
  auto [a, b] = MakePipe();
  WriteFrame(*a, Frame{MessageType::kParams, {5}});
  const Frame f = ReadFrame(*b);
  EXPECT_EQ(f.type, MessageType::kParams);
  EXPECT_EQ(f.payload, std::vector<uint8_t>{5});

  b->set_timeout(std::chrono::milliseconds(50));
  EXPECT_EQ(CodeOf([&] { ReadFrame(*b); }), ErrorCode::kTimeout);

  std::vector<uint8_t> bad = EncodeFrame(Frame{MessageType::kQuery, {1, 2}});
  bad.back() ^= 1;
  a->Write(bad);
  EXPECT_EQ(CodeOf([&] { ReadFrame(*b); }), ErrorCode::kChecksumMismatch);

  a->Close();
  EXPECT_EQ(CodeOf([&] { ReadFrame(*b); }), ErrorCode::kIo);
}

TEST(EndpointTest, Parse) {
  EXPECT_EQ(ParseEndpoint("127.0.0.1:8080"),
            std::make_pair(std::string("127.0.0.1"), uint16_t{8080}));
  EXPECT_EQ(ParseEndpoint("[::1]:9000"),
            std::make_pair(std::string("::1"), uint16_t{9000}));
  // An empty host listens on every interface.
  EXPECT_EQ(ParseEndpoint(":80"),
            std::make_pair(std::string(), uint16_t{80}));
  for (const char* bad : {"localhost", "host:", "host:70000", "host:8x"}) {
    EXPECT_EQ(CodeOf([&] { ParseEndpoint(bad); }), ErrorCode::kOutOfRange)
        << bad;
  }
}

struct PipeRun {
  std::vector<uint64_t> result;
  std::vector<uint8_t> sent;
  std::vector<uint8_t> received;
  SessionSummary summary;
};

PipeRun PipeSession(const std::vector<uint64_t>& receiver_set,
                const SenderContext& ctx, const PsiConfig& config,
                uint64_t seed) {
  auto [r_end, s_end] = MakePipe();
  std::thread server([&, s = s_end.get()] {
    try {
      ServeSession(*s, ctx);
    } catch (const Error&) {
    }
  });
  PipeRun run;
  RecordingTransport rec(*r_end);
  try {
    run.result = ReceiverSession(rec, receiver_set, config, seed,
                                 &run.summary);
  } catch (...) {
    r_end->Close();
    server.join();
    run.sent = rec.sent();
    run.received = rec.received();
    throw;
  }
  server.join();
  run.sent = rec.sent();
  run.received = rec.received();
  return run;
}

class SessionTest : public ::testing::Test {
 protected:
  SessionTest() {
    ctx_.config = SmallConfig();
    ctx_.set = RandomSet(800, 1);
    receiver_ = RandomSet(30, 2);
    receiver_.insert(receiver_.end(), ctx_.set.begin(), ctx_.set.begin() + 6);
  }

  SenderContext ctx_;
  std::vector<uint64_t> receiver_;
};

TEST_F(SessionTest, PipeSessionMatchesInProcessRun) {
  const PipeRun first = PipeSession(receiver_, ctx_, ctx_.config, 77);
  EXPECT_EQ(first.result, oracle::Intersect(receiver_, ctx_.set));
  EXPECT_EQ(first.result, PsiRun(receiver_, ctx_.set, ctx_.config, 77));

  const std::vector<Frame> out = SplitFrames(first.sent);
  const std::vector<Frame> in = SplitFrames(first.received);
  ASSERT_EQ(out.size(), 2 + first.summary.queries);
  ASSERT_EQ(in.size(), 1 + first.summary.queries);
  EXPECT_EQ(out[0].type, MessageType::kParams);
  EXPECT_EQ(out[1].type, MessageType::kKeyMaterial);
  EXPECT_EQ(in[0].type, MessageType::kParams);
  for (size_t i = 0; i < first.summary.queries; ++i) {
    EXPECT_EQ(out[2 + i].type, MessageType::kQuery);
    EXPECT_EQ(in[1 + i].type, MessageType::kReply);
  }

  // Same seed, same bytes in both directions.
  const PipeRun second = PipeSession(receiver_, ctx_, ctx_.config, 77);
  EXPECT_EQ(second.sent, first.sent);
  EXPECT_EQ(second.received, first.received);
}

TEST_F(SessionTest, EmptyReceiverSetSendsNoQueries) {
  const PipeRun run = PipeSession({}, ctx_, ctx_.config, 5);
  EXPECT_TRUE(run.result.empty());
  EXPECT_EQ(run.summary.queries, 0u);
  for (const Frame& f : SplitFrames(run.sent)) {
    EXPECT_NE(f.type, MessageType::kQuery);
  }
}

TEST_F(SessionTest, ParamsMismatchIsReported) {
  PsiConfig other = ctx_.config;
  other.b = 13;
  auto [r_end, s_end] = MakePipe();
  ErrorCode server_code = ErrorCode::kNotFound;
  std::thread server([&, s = s_end.get()] {
    server_code = CodeOf([&] { ServeSession(*s, ctx_); });
  });
  RecordingTransport rec(*r_end);
  EXPECT_EQ(CodeOf([&] { ReceiverSession(rec, receiver_, other, 3); }),
            ErrorCode::kHandshakeMismatch);
  server.join();
  EXPECT_EQ(server_code, ErrorCode::kHandshakeMismatch);
  const std::vector<Frame> in = SplitFrames(rec.received());
  ASSERT_EQ(in.size(), 1u);
  EXPECT_EQ(in[0].type, MessageType::kError);
  EXPECT_EQ(in[0].payload.at(0),
            static_cast<uint8_t>(WireErrorCode::kParamsMismatch));
}

TEST_F(SessionTest, CorruptQueryGetsMalformedError) {
  const PipeRun good = PipeSession(receiver_, ctx_, ctx_.config, 9);
  const std::vector<Frame> frames = SplitFrames(good.sent);
  ASSERT_GE(frames.size(), 3u);

  auto [r_end, s_end] = MakePipe();
  ErrorCode server_code = ErrorCode::kNotFound;
  std::thread server([&, s = s_end.get()] {
    server_code = CodeOf([&] { ServeSession(*s, ctx_); });
  });
  WriteFrame(*r_end, frames[0]);
  WriteFrame(*r_end, frames[1]);
  std::vector<uint8_t> query = EncodeFrame(frames[2]);
  query[kFrameHeaderBytes + 40] ^= 0x10;
  r_end->Write(query);
  EXPECT_EQ(ReadFrame(*r_end).type, MessageType::kParams);
  const Frame err = ReadFrame(*r_end);
  server.join();
  EXPECT_EQ(server_code, ErrorCode::kChecksumMismatch);
  ASSERT_EQ(err.type, MessageType::kError);
  EXPECT_EQ(err.payload.at(0),
            static_cast<uint8_t>(WireErrorCode::kMalformed));
}

TEST_F(SessionTest, TcpLoopback) {
  TcpListener listener("127.0.0.1", 0);
  ASSERT_NE(listener.port(), 0);
  std::thread server([&] { ServeForever(listener, ctx_, 1); });
  auto conn = TcpConnect("127.0.0.1", listener.port(),
                         std::chrono::milliseconds(5000));
  const std::vector<uint64_t> got =
      ReceiverSession(*conn, receiver_, ctx_.config, 11);
  conn->Close();
  server.join();
  EXPECT_EQ(got, oracle::Intersect(receiver_, ctx_.set));
}

TEST(TcpTest, ConnectFailureIsIo) {
  uint16_t port = 0;
  {
    TcpListener probe("127.0.0.1", 0);
    port = probe.port();
  }
  EXPECT_EQ(CodeOf([&] {
              TcpConnect("127.0.0.1", port, std::chrono::milliseconds(300));
            }),
            ErrorCode::kIo);
}

}  // namespace
}  // namespace lutpsi
