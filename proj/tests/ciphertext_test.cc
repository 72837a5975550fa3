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

#include "lutpsi/ciphertext.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lutpsi/error.h"
#include "lutpsi/params.h"
#include "lutpsi/sampler.h"
#include "oracles.h"

namespace lutpsi {
namespace {

class CiphertextTest : public ::testing::Test {
 protected:
  CiphertextTest()
      : q_(oracle::NttPrime(54, 64)),
        ring_(64, q_),
        sampler_(3.19, SeedFromU64(11)),
        quiet_(NoiseSampler::NoiselessForTesting(SeedFromU64(12))),
        key_(GenerateRlweKey(ring_, sampler_)),
        rng_(13) {}

  Polynomial RandomPoly() {
    Polynomial p(ring_.n());
    for (uint64_t& c : p.coeffs) c = rng_() % q_;
    return p;
  }
  Polynomial SmallPoly(uint64_t bound) {
    Polynomial p(ring_.n());
    for (uint64_t& c : p.coeffs) c = rng_() % bound;
    return p;
  }
  std::vector<uint64_t> KeyPoly() const {
    std::vector<uint64_t> z(ring_.n());
    for (size_t i = 0; i < z.size(); ++i) {
      z[i] = oracle::Reduce(key_.coeffs[i], q_);
    }
    return z;
  }
  // b - a z by schoolbook multiplication.
  std::vector<uint64_t> OraclePhase(const RlweCiphertext& c) const {
    const RlweCiphertext cc = RlweToCoefficient(c, ring_);
    const std::vector<uint64_t> az =
        oracle::NegacyclicMul(cc.a.coeffs, KeyPoly(), q_);
    std::vector<uint64_t> out(ring_.n());
    for (size_t i = 0; i < out.size(); ++i) {
      out[i] = (cc.b.coeffs[i] + q_ - az[i]) % q_;
    }
    return out;
  }
  int64_t MaxNoise(const std::vector<uint64_t>& phase,
                   const std::vector<uint64_t>& want) const {
    int64_t worst = 0;
    for (size_t i = 0; i < phase.size(); ++i) {
      const int64_t e =
          std::abs(oracle::Centered((phase[i] + q_ - want[i]) % q_, q_));
      worst = std::max(worst, e);
    }
    return worst;
  }

  uint64_t q_;
  RingContext ring_;
  NoiseSampler sampler_;
  NoiseSampler quiet_;
  RlweSecretKey key_;
  std::mt19937_64 rng_;
};

TEST_F(CiphertextTest, KeyDistributions) {
  for (int64_t c : key_.coeffs) EXPECT_TRUE(c >= -1 && c <= 1);
  EXPECT_EQ(key_.z.coeffs, KeyPoly());
  const LweSecretKey s = GenerateLweKey(500, sampler_);
  ASSERT_EQ(s.s.size(), 500u);
  size_t ones = 0;
  for (int64_t v : s.s) {
    EXPECT_TRUE(v == 0 || v == 1);
    ones += v;
  }
  EXPECT_GT(ones, 150u);
  EXPECT_LT(ones, 350u);
}

TEST_F(CiphertextTest, RoundDiv) {
  EXPECT_EQ(RoundDiv(7, 2), 4u);  // ties up
  EXPECT_EQ(RoundDiv(5, 4), 1u);
  EXPECT_EQ(RoundDiv(6, 4), 2u);
  EXPECT_EQ(RoundDiv(67127297, 8), 8390912u);
}

TEST_F(CiphertextTest, LwePhaseMatchesOracle) {
  const LweSecretKey s = GenerateLweKey(100, sampler_);
  for (int i = 0; i < 50; ++i) {
    const uint64_t mu = rng_() % 512;
    const LweCiphertext c = LweEncryptPhase(mu, s, 512, quiet_);
    EXPECT_EQ(LwePhase(c, s), mu);
    EXPECT_EQ(oracle::LwePhase(c.a, c.b, s.s, 512), mu);
  }
}

TEST_F(CiphertextTest, LweEncryptDecrypt) {
  const LweSecretKey s = GenerateLweKey(256, sampler_);
  for (uint64_t m = 0; m < 4; ++m) {
    for (int i = 0; i < 50; ++i) {
      EXPECT_EQ(LweDecrypt(LweEncrypt(m, 4, s, 512, sampler_), s, 4), m);
    }
  }
  const LweCiphertext x = LweEncrypt(1, 4, s, 512, sampler_);
  const LweCiphertext y = LweEncrypt(2, 4, s, 512, sampler_);
  EXPECT_EQ(LweDecrypt(LweAdd(x, y), s, 4), 3u);
  EXPECT_EQ(LweDecrypt(LweSub(x, y), s, 4), 3u);
  LweCiphertext z = x;
  LweAddConstant(z, 256);
  EXPECT_EQ(LweDecrypt(z, s, 4), 3u);
}

TEST_F(CiphertextTest, RlwePhaseMatchesSchoolbook) {
  const Polynomial m = RandomPoly();
  const RlweCiphertext c = RlweEncrypt(m, key_, ring_, quiet_);
  EXPECT_EQ(OraclePhase(c), m.coeffs);
  EXPECT_EQ(RlwePhase(c, key_, ring_).coeffs, m.coeffs);
  const RlweCiphertext d = RlweEncrypt(m, key_, ring_, quiet_, Domain::kNtt);
  EXPECT_EQ(d.domain(), Domain::kNtt);
  EXPECT_EQ(OraclePhase(d), m.coeffs);
}

TEST_F(CiphertextTest, RlweEncryptScaledDecrypts) {
  std::vector<uint64_t> m(ring_.n());
  for (uint64_t& v : m) v = rng_() % 4;
  const RlweCiphertext c = RlweEncryptScaled(m, 4, key_, ring_, sampler_);
  EXPECT_EQ(RlweDecrypt(c, key_, 4, ring_), m);
}

TEST_F(CiphertextTest, RlweArithmetic) {
  const Polynomial m1 = RandomPoly(), m2 = RandomPoly();
  const RlweCiphertext c1 = RlweEncrypt(m1, key_, ring_, quiet_);
  const RlweCiphertext c2 = RlweEncrypt(m2, key_, ring_, quiet_);
  EXPECT_EQ(OraclePhase(RlweAdd(c1, c2, ring_)),
            ring_.Add(m1, m2).coeffs);
  EXPECT_EQ(OraclePhase(RlweSub(c1, c2, ring_)),
            ring_.Sub(m1, m2).coeffs);
  EXPECT_EQ(OraclePhase(RlweScalarMul(c1, 7, ring_)),
            ring_.ScalarMul(m1, 7).coeffs);
  EXPECT_EQ(OraclePhase(RlweMultiplyMonomial(c1, 70, ring_)),
            oracle::MonomialMul(m1.coeffs, 70, q_));
  EXPECT_EQ(OraclePhase(RlweTrivial(m1)), m1.coeffs);
  EXPECT_EQ(RlweToCoefficient(RlweToNtt(c1, ring_), ring_), c1);
}

TEST_F(CiphertextTest, ExtractedPhaseEqualsCoefficient) {
  const Polynomial m = RandomPoly();
  const RlweCiphertext c = RlweEncrypt(m, key_, ring_, quiet_);
  const LweSecretKey s = ExtractedKey(key_);
  for (size_t i = 0; i < ring_.n(); ++i) {
    const LweCiphertext e = ExtractLwe(c, i, ring_);
    ASSERT_EQ(e.dim(), ring_.n());
    ASSERT_EQ(oracle::LwePhase(e.a, e.b, s.s, q_), m.coeffs[i]) << i;
  }
  EXPECT_THROW(ExtractLwe(c, ring_.n(), ring_), Error);
}

TEST_F(CiphertextTest, DecompositionRecomposes) {
  const uint64_t base = 512;
  const size_t digits = DigitCount(base, q_);
  const Polynomial a = RandomPoly();
  std::vector<uint64_t> out(digits * ring_.n());
  for (DigitStyle style : {DigitStyle::kUnsigned, DigitStyle::kBalanced}) {
    DecomposePolynomial(a.coeffs, base, digits, style, ring_.mod(), out);
    for (size_t i = 0; i < ring_.n(); ++i) {
      oracle::u128 acc = 0;
      oracle::u128 weight = 1;
      for (size_t j = 0; j < digits; ++j) {
        const uint64_t d = out[j * ring_.n() + i];
        ASSERT_LT(d, q_);
        const int64_t sd = oracle::Centered(d, q_);
        if (style == DigitStyle::kUnsigned) {
          ASSERT_LT(d, base);
        } else if (j + 1 < digits) {
          ASSERT_GE(sd, -static_cast<int64_t>(base / 2));
          ASSERT_LT(sd, static_cast<int64_t>(base / 2));
        }
        acc = (acc + oracle::MulMod(d, static_cast<uint64_t>(weight % q_),
                                    q_)) % q_;
        weight *= base;
      }
      ASSERT_EQ(static_cast<uint64_t>(acc), a.coeffs[i]);
    }
  }
}

TEST_F(CiphertextTest, NoiselessExternalProductIsExact) {
  for (DigitStyle style : {DigitStyle::kUnsigned, DigitStyle::kBalanced}) {
    const Polynomial m1 = RandomPoly();
    const Polynomial m2 = SmallPoly(3);
    const RlweCiphertext c = RlweEncrypt(m1, key_, ring_, quiet_);
    const RgswCiphertext g = RgswEncrypt(m2, key_, 512, ring_, quiet_);
    const RlweCiphertext out = ExternalProduct(c, g, ring_, style);
    EXPECT_EQ(OraclePhase(out),
              oracle::NegacyclicMul(m1.coeffs, m2.coeffs, q_));
  }
}

TEST_F(CiphertextTest, ExternalProductNoiseIsSmall) {
  std::vector<uint64_t> m(ring_.n());
  for (uint64_t& v : m) v = rng_() % 4;
  const RlweCiphertext c = RlweEncryptScaled(m, 4, key_, ring_, sampler_);
  const RgswCiphertext one = RgswEncryptConstant(1, key_, 512, ring_, sampler_);
  RlweCiphertext acc = c;
  for (int i = 0; i < 20; ++i) acc = ExternalProduct(acc, one, ring_);
  EXPECT_EQ(RlweDecrypt(acc, key_, 4, ring_), m);
}

TEST_F(CiphertextTest, CmuxSelects) {
  const Polynomial m0 = RandomPoly(), m1 = RandomPoly();
  const RlweCiphertext c0 = RlweEncrypt(m0, key_, ring_, quiet_);
  const RlweCiphertext c1 = RlweEncrypt(m1, key_, ring_, quiet_);
  for (uint64_t bit : {0, 1}) {
    const RgswCiphertext g =
        RgswEncryptConstant(bit, key_, 512, ring_, quiet_);
    EXPECT_EQ(OraclePhase(Cmux(g, c0, c1, ring_)),
              bit ? m1.coeffs : m0.coeffs);
  }
}

TEST_F(CiphertextTest, BlindRotateStepRotates) {
  const Polynomial m = RandomPoly();
  const RlweCiphertext c = RlweEncrypt(m, key_, ring_, quiet_);
  for (uint64_t bit : {0, 1}) {
    const RgswCiphertext g =
        RgswEncryptConstant(bit, key_, 512, ring_, quiet_);
    const std::vector<uint64_t> want =
        bit ? oracle::MonomialMul(m.coeffs, -5, q_) : m.coeffs;
    EXPECT_EQ(OraclePhase(BlindRotateStep(g, c, 5, ring_)), want);
  }
}

TEST_F(CiphertextTest, RlweKeySwitch) {
  const RlweSecretKey other = GenerateRlweKey(ring_, sampler_);
  const Polynomial m = RandomPoly();
  // Encrypt under `other`, switch to key_.
  const RlweCiphertext c = RlweEncrypt(m, other, ring_, quiet_);
  const RlweKeySwitchKey ksk =
      GenerateRlweKeySwitchKey(other.z, key_, 512, ring_, quiet_);
  EXPECT_EQ(OraclePhase(RlweKeySwitch(c, ksk, ring_)), m.coeffs);

  const RlweKeySwitchKey noisy =
      GenerateRlweKeySwitchKey(other.z, key_, 512, ring_, sampler_);
  const RlweCiphertext d = RlweEncrypt(m, other, ring_, sampler_);
  EXPECT_LT(MaxNoise(OraclePhase(RlweKeySwitch(d, noisy, ring_)), m.coeffs),
            int64_t{1} << 20);
}

TEST_F(CiphertextTest, LweKeySwitchAndModSwitch) {
  const LweSecretKey from = ExtractedKey(key_);
  const LweSecretKey to = GenerateLweKey(32, sampler_);
  const LweKeySwitchKey ksk = GenerateLweKeySwitchKey(from, to, 25, q_,
                                                      sampler_);
  EXPECT_EQ(ksk.from_dim, ring_.n());
  EXPECT_EQ(ksk.to_dim, 32u);
  EXPECT_EQ(ksk.digits, DigitCount(25, q_));
  for (uint64_t m = 0; m < 4; ++m) {
    const LweCiphertext c = LweEncrypt(m, 4, from, q_, sampler_);
    const LweCiphertext switched = LweKeySwitch(c, ksk);
    EXPECT_EQ(switched.dim(), 32u);
    EXPECT_EQ(LweDecrypt(switched, to, 4), m);
    const LweCiphertext small = LweModSwitch(switched, 512);
    EXPECT_EQ(small.modulus, 512u);
    EXPECT_EQ(LweDecrypt(small, to, 4), m);
  }
}

TEST_F(CiphertextTest, ModSwitchRoundsEachEntry) {
  LweCiphertext c;
  c.modulus = 1000;
  c.a = {0, 1, 2, 3, 999};
  c.b = 500;
  const LweCiphertext s = LweModSwitch(c, 8);
  // round(x * 8 / 1000): 0, 0.008, 0.016, 0.024, 7.992 -> 0, 0, 0, 0, 8 = 0.
  EXPECT_EQ(s.a, (std::vector<uint64_t>{0, 0, 0, 0, 0}));
  EXPECT_EQ(s.b, 4u);
}

TEST_F(CiphertextTest, ShapeErrors) {
  const RingContext other(32, oracle::NttPrime(54, 32));
  const RlweCiphertext c = RlweZero(other);
  EXPECT_THROW(ExtractLwe(c, 0, ring_), Error);
}

}  // namespace
}  // namespace lutpsi
