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

#include "lutpsi/sampler.h"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "lutpsi/error.h"

namespace lutpsi {
namespace {

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error(ErrorCode::kIo, "libsodium initialization failed");
}

}  // namespace

Seed SeedFromU64(uint64_t value) {
  EnsureSodium();
  uint8_t bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<uint8_t>(value >> (8 * i));
  Seed out;
  crypto_generichash(out.data(), out.size(), bytes, sizeof(bytes), nullptr, 0);
  return out;
}

Seed DeriveSeed(const Seed& parent, std::string_view label) {
  EnsureSodium();
  std::vector<uint8_t> input(parent.begin(), parent.end());
  input.insert(input.end(), label.begin(), label.end());
  Seed out;
  crypto_generichash(out.data(), out.size(), input.data(), input.size(),
                     nullptr, 0);
  return out;
}

Prng::Prng(const Seed& seed) : key_(seed) { EnsureSodium(); }

void Prng::Refill() {
  static const uint8_t kZeros[kBufferBytes] = {};
  static const uint8_t kNonce[crypto_stream_chacha20_NONCEBYTES] = {};
  crypto_stream_chacha20_xor_ic(buffer_.data(), kZeros, kBufferBytes, kNonce,
                                block_counter_, key_.data());
  block_counter_ += kBufferBytes / 64;
  offset_ = 0;
}

uint64_t Prng::NextU64() {
  if (offset_ + 8 > kBufferBytes) Refill();
  uint64_t v;
  std::memcpy(&v, buffer_.data() + offset_, 8);
  offset_ += 8;
  return v;
}

uint64_t Prng::Uniform(uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kOutOfRange, "empty range");
  // Reject the top partial interval.
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound + 1) % bound;
  uint64_t v;
  do {
    v = NextU64();
  } while (v > limit);
  return v % bound;
}

double Prng::NextUnitOpen() {
  return (static_cast<double>(NextU64() >> 11) + 1.0) * 0x1.0p-53;
}

void Prng::Fill(std::span<uint8_t> out) {
  for (auto& byte : out) {
    if (offset_ >= kBufferBytes) Refill();
    byte = buffer_[offset_++];
  }
}

NoiseSampler::NoiseSampler(double sigma, const Seed& seed)
    : sigma_(sigma), prng_(seed) {
  if (!(sigma > 0)) throw Error(ErrorCode::kInvalidSigma, "sigma must be > 0");
}

int64_t NoiseSampler::Gaussian() {
  if (noiseless_) return 0;
  double z;
  if (has_spare_) {
    z = spare_;
    has_spare_ = false;
  } else {
    double radius = std::sqrt(-2.0 * std::log(prng_.NextUnitOpen()));
    double angle = 2.0 * std::numbers::pi * prng_.NextUnitOpen();
    z = radius * std::cos(angle);
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
  }
  return static_cast<int64_t>(std::floor(sigma_ * z + 0.5));
}

}  // namespace lutpsi
