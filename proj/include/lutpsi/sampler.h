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

// Seeded randomness. Prng is a ChaCha20 keystream addressed by block
// counter, so two generators built from the same seed emit identical
// streams. NoiseSampler layers the error and key distributions on top.

#ifndef LUTPSI_SAMPLER_H_
#define LUTPSI_SAMPLER_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace lutpsi {

using Seed = std::array<uint8_t, 32>;

// BLAKE2b-256 of the little-endian bytes of value.
Seed SeedFromU64(uint64_t value);

// Domain-separated child seed: BLAKE2b-256(parent || label).
Seed DeriveSeed(const Seed& parent, std::string_view label);

class Prng {
 public:
  explicit Prng(const Seed& seed);

  uint64_t NextU64();

  // Uniform in [0, bound) by rejection; bound > 0.
  uint64_t Uniform(uint64_t bound);

  // Uniform in (0, 1].
  double NextUnitOpen();

  void Fill(std::span<uint8_t> out);

 private:
  void Refill();

  static constexpr size_t kBufferBytes = 1024;

  Seed key_;
  uint64_t block_counter_ = 0;
  std::array<uint8_t, kBufferBytes> buffer_;
  size_t offset_ = kBufferBytes;
};

class NoiseSampler {
 public:
  NoiseSampler(double sigma, const Seed& seed);

  double sigma() const { return sigma_; }
  bool noiseless() const { return noiseless_; }
  Prng& prng() { return prng_; }

  // Rounded continuous Gaussian, floor(sigma * z + 1/2). Zero when
  // noiseless.
  int64_t Gaussian();

  uint64_t Uniform(uint64_t bound) { return prng_.Uniform(bound); }
  int Binary() { return static_cast<int>(prng_.NextU64() & 1); }
  // Uniform over {-1, 0, 1}.
  int Ternary() { return static_cast<int>(prng_.Uniform(3)) - 1; }

#ifdef LUTPSI_TESTING
  // All Gaussian errors are zero; uniform and key draws are unaffected.
  static NoiseSampler NoiselessForTesting(const Seed& seed) {
    NoiseSampler sampler(1.0, seed);
    sampler.noiseless_ = true;
    return sampler;
  }
#endif

 private:
  double sigma_;
  Prng prng_;
  bool noiseless_ = false;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace lutpsi

#endif  // LUTPSI_SAMPLER_H_
