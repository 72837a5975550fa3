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

#include "lutpsi/bootstrap.h"

#include <gtest/gtest.h>

#include <vector>

#include "lutpsi/error.h"
#include "lutpsi/params.h"
#include "lutpsi/sampler.h"
#include "oracles.h"

namespace lutpsi {
namespace {

// A reduced set with the MEDIUM bases and moduli widths: quick key
// generation, same rotation scale 2N/q = 1.
ParameterSet SmallParams() {
  ParameterSet p = BuiltinParams("MEDIUM");
  p.name = "SMALL";
  p.lwe_dim = 24;
  p.ring_dim = 256;
  p.ring_modulus = oracle::NttPrime(27, 256);
  Validate(p);
  return p;
}

uint64_t NandOracle(uint64_t m1, uint64_t m2) { return (m1 & m2) ? 0 : 1; }

TEST(BootstrapTest, TestVectorDecodesPhaseClasses) {
  const ParameterSet p = SmallParams();
  const auto ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  const uint64_t q = p.lwe_modulus, Q = ring->modulus();
  const uint64_t two_n = 2 * ring->n();
  const Polynomial tv = NandTestVector(*ring);
  const uint64_t eighth = RoundDiv(Q, 8);
  // Gate inputs give phase classes m1 + m2 + 2 mod 4 of 2 (0,0), 3 (0,1)
  // and 0 (1,1); the NAND outputs are 1, 1, 0.
  const struct {
    uint64_t cls, want;
  } classes[] = {{2, 1}, {3, 1}, {0, 0}};
  for (const auto& c : classes) {
    for (int64_t e = -static_cast<int64_t>(q / 8) + 1;
         e < static_cast<int64_t>(q / 8); ++e) {
      const uint64_t phase = oracle::Reduce(
          static_cast<int64_t>(c.cls * q / 4) + e, q);
      const std::vector<uint64_t> rotated = oracle::MonomialMul(
          tv.coeffs, static_cast<int64_t>(phase * two_n / q), Q);
      const uint64_t out = (rotated[0] + eighth) % Q;
      // Decode at t = 4 and read the bit.
      const uint64_t m = RoundDiv(static_cast<oracle::u128>(out) * 4, Q) % 4;
      ASSERT_EQ(m, c.want) << "class " << c.cls << " e " << e;
    }
  }
}

TEST(BootstrapTest, AccInitRotatesTestVector) {
  const ParameterSet p = SmallParams();
  const auto ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  const Polynomial tv = NandTestVector(*ring);
  for (uint64_t b : {0, 1, 100, 511}) {
    const RlweCiphertext acc = AccInit(b, Gate::kNand, p, *ring);
    EXPECT_EQ(acc.a.coeffs, std::vector<uint64_t>(ring->n(), 0));
    EXPECT_EQ(acc.b.coeffs,
              oracle::MonomialMul(tv.coeffs,
                                  static_cast<int64_t>(b * 2 * p.ring_dim /
                                                       p.lwe_modulus),
                                  ring->modulus()));
  }
  EXPECT_THROW(AccInit(0, Gate::kAnd, p, *ring), Error);
  EXPECT_THROW(AccInit(p.lwe_modulus, Gate::kNand, p, *ring), Error);
}

// Without noise the accumulator phase is exactly tv * X^r with r tracking
// b - <a, s> digit by digit.
TEST(BootstrapTest, NoiselessAccumulatorTracksRotation) {
  const ParameterSet p = SmallParams();
  const auto ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  NoiseSampler quiet = NoiseSampler::NoiselessForTesting(SeedFromU64(3));
  const GateSecretKey sk = GenerateGateSecretKey(p, *ring, quiet);
  const BootstrapKey bk =
      GenerateBootstrapKey(sk.lwe, sk.rlwe, p, *ring, quiet);
  ASSERT_EQ(bk.entries.size(), p.lwe_dim * p.acc_digits() * p.acc_base);

  const uint64_t q = p.lwe_modulus, Q = ring->modulus();
  const int64_t two_n = 2 * static_cast<int64_t>(p.ring_dim);
  const int64_t scale = two_n / static_cast<int64_t>(q);
  const Polynomial tv = NandTestVector(*ring);
  std::vector<uint64_t> a(p.lwe_dim);
  for (size_t i = 0; i < a.size(); ++i) a[i] = (37 * i + 11) % q;
  const uint64_t b = 300;

  RlweCiphertext acc = AccInit(b, Gate::kNand, p, *ring);
  int64_t rotation = static_cast<int64_t>(b) * scale;
  for (size_t i = 0; i < p.lwe_dim; ++i) {
    const uint64_t x = (q - a[i]) % q;
    const std::vector<uint64_t> digits =
        oracle::Digits(x, p.acc_base, p.acc_digits());
    uint64_t weight = 1;
    for (size_t pos = 0; pos < digits.size(); ++pos) {
      acc = ExternalProduct(acc, bk.at(i, pos, digits[pos]), *ring);
      rotation += scale * static_cast<int64_t>(digits[pos] * weight) *
                  sk.lwe.s[i];
      weight *= p.acc_base;
      const Polynomial phase = RlwePhase(acc, sk.rlwe, *ring);
      ASSERT_EQ(phase.coeffs, oracle::MonomialMul(tv.coeffs, rotation, Q))
          << "i " << i << " pos " << pos;
    }
  }
  // Matches the library loop and the total phase.
  RlweCiphertext acc2 = AccInit(b, Gate::kNand, p, *ring);
  Accumulate(acc2, a, bk, p, *ring);
  EXPECT_EQ(acc2, acc);
  const int64_t total = static_cast<int64_t>(
      oracle::LwePhase(a, b, sk.lwe.s, q)) * scale;
  EXPECT_EQ(RlwePhase(acc2, sk.rlwe, *ring).coeffs,
            oracle::MonomialMul(tv.coeffs, total, Q));
}

TEST(BootstrapTest, AccumulateRejectsWrongMaskLength) {
  const ParameterSet p = SmallParams();
  const auto ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  BootstrapKey bk;
  bk.lwe_dim = p.lwe_dim;
  RlweCiphertext acc = AccInit(0, Gate::kNand, p, *ring);
  std::vector<uint64_t> a(p.lwe_dim + 1);
  EXPECT_THROW(Accumulate(acc, a, bk, p, *ring), Error);
}

TEST(BootstrapTest, KeyBytes) {
  const ParameterSet p = BuiltinParams("MEDIUM");
  // n * dr * B_r RGSWs of 2 dG RLWEs of 2 N words.
  EXPECT_EQ(BootstrapKeyBytes(p), uint64_t{256} * 2 * 23 * (2 * 3) * 2 *
                                      1024 * 8);
}

class NandTest : public ::testing::TestWithParam<const char*> {};

TEST_P(NandTest, TruthTableAndChain) {
  ParameterSet p = std::string(GetParam()) == "SMALL"
                       ? SmallParams()
                       : BuiltinParams(GetParam());
  NoiseSampler sampler(p.sigma, SeedFromU64(5));
  const auto ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  const GateSecretKey sk = GenerateGateSecretKey(p, *ring, sampler);
  const GateKeys keys = GenerateGateKeys(sk, p, sampler);
  for (uint64_t m1 = 0; m1 < 2; ++m1) {
    for (uint64_t m2 = 0; m2 < 2; ++m2) {
      for (int i = 0; i < 10; ++i) {
        const LweCiphertext out =
            BootstrapNand(EncryptBit(m1, sk, p, sampler),
                          EncryptBit(m2, sk, p, sampler), keys);
        ASSERT_EQ(out.modulus, p.lwe_modulus);
        ASSERT_EQ(out.dim(), p.lwe_dim);
        ASSERT_EQ(DecryptBit(out, sk), NandOracle(m1, m2));
      }
    }
  }
  // Outputs feed further gates.
  uint64_t x = 1, y = 0;
  LweCiphertext cx = EncryptBit(x, sk, p, sampler);
  LweCiphertext cy = EncryptBit(y, sk, p, sampler);
  for (int depth = 0; depth < 4; ++depth) {
    const LweCiphertext cz = BootstrapNand(cx, cy, keys);
    const uint64_t z = NandOracle(x, y);
    ASSERT_EQ(DecryptBit(cz, sk), z) << "depth " << depth;
    cy = cx;
    y = x;
    cx = cz;
    x = z;
  }
}

INSTANTIATE_TEST_SUITE_P(Sets, NandTest,
                         ::testing::Values("SMALL", "MEDIUM"));

TEST(BootstrapTest, RejectsForeignCiphertext) {
  const ParameterSet p = SmallParams();
  GateKeys keys;
  keys.params = p;
  keys.ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  LweCiphertext c;
  c.modulus = 1024;
  c.a.assign(p.lwe_dim, 0);
  EXPECT_THROW(BootstrapNand(c, c, keys), Error);
}

}  // namespace
}  // namespace lutpsi
