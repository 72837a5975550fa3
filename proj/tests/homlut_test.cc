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

#include "lutpsi/homlut.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lutpsi/counters.h"
#include "lutpsi/error.h"
#include "lutpsi/params.h"
#include "lutpsi/sampler.h"
#include "oracles.h"

namespace lutpsi {
namespace {

uint64_t CmuxOracle(uint64_t bits, uint64_t n) {
  uint64_t log_n = 0;
  while ((uint64_t{1} << log_n) < n) ++log_n;
  if (bits < log_n) return bits;
  return (uint64_t{1} << (bits - log_n)) - 1 + log_n;
}

TEST(HomLutTest, CmuxTreeCount) {
  // 2^7 - 1 + 11 for an 18-bit index over N = 2048.
  EXPECT_EQ(CmuxTreeCount(18, 2048), 138u);
  for (uint64_t n : {64, 1024, 2048}) {
    for (uint64_t bits = 1; bits <= 20; ++bits) {
      EXPECT_EQ(CmuxTreeCount(bits, n), CmuxOracle(bits, n));
    }
  }
}

class LutFixture : public ::testing::Test {
 protected:
  LutFixture()
      : params_(PsiParams(64)),
        ring_(RingContext::Get(params_.ring_dim, params_.ring_modulus)),
        sampler_(params_.sigma, SeedFromU64(21)),
        key_(GenerateRlweKey(*ring_, sampler_)),
        rng_(22) {}

  std::vector<RgswCiphertext> EncryptIndex(uint64_t x, size_t bits) {
    std::vector<RgswCiphertext> out;
    for (size_t i = 0; i < bits; ++i) {
      out.push_back(RgswEncryptConstant((x >> i) & 1, key_,
                                        params_.gadget_base, *ring_,
                                        sampler_));
    }
    return out;
  }

  ParameterSet params_;
  std::shared_ptr<const RingContext> ring_;
  NoiseSampler sampler_;
  RlweSecretKey key_;
  std::mt19937_64 rng_;
};

TEST_F(LutFixture, LayoutMatchesRowSlotSplit) {
  const size_t bits = 8;
  std::vector<uint8_t> table(1 << bits);
  for (uint8_t& v : table) v = rng_() % 4;
  const PackedLut lut = BuildPackedLut(table, bits, 4, *ring_);
  ASSERT_EQ(lut.rows.size(), (1u << bits) / 64);
  EXPECT_EQ(LutRowCount(bits, *ring_), lut.rows.size());
  EXPECT_EQ(LutRowCount(3, *ring_), 1u);
  const uint64_t delta = RoundDiv(ring_->modulus(), 4);
  for (uint64_t x = 0; x < table.size(); ++x) {
    const LutPosition pos = LutLocate(x, *ring_);
    ASSERT_EQ(pos.row, x / 64);
    ASSERT_EQ(pos.slot, x % 64);
    const RlweCiphertext& row = lut.rows[pos.row];
    ASSERT_EQ(row.a.coeffs[pos.slot], 0u);
    ASSERT_EQ(row.b.coeffs[pos.slot],
              oracle::MulMod(delta, table[x], ring_->modulus()));
  }
  std::vector<uint8_t> bad(table);
  bad[3] = 4;
  EXPECT_THROW(BuildPackedLut(bad, bits, 4, *ring_), Error);
  EXPECT_THROW(BuildPackedLut(table, bits + 1, 4, *ring_), Error);
}

TEST_F(LutFixture, EvaluatesPlainAndEncryptedTables) {
  const LweSecretKey extracted = ExtractedKey(key_);
  for (size_t bits : {3, 6, 8}) {
    std::vector<uint8_t> table(size_t{1} << bits);
    for (uint8_t& v : table) v = rng_() % 4;
    const PackedLut plain = BuildPackedLut(table, bits, 4, *ring_);
    const PackedLut secret =
        EncryptPackedLut(table, bits, 4, key_, *ring_, sampler_);
    for (int trial = 0; trial < 6; ++trial) {
      const uint64_t x = rng_() % table.size();
      const std::vector<RgswCiphertext> index = EncryptIndex(x, bits);
      for (const PackedLut* lut : {&plain, &secret}) {
        const OpCounts before = ReadCounters();
        const LweCiphertext out = LutEval(*lut, index, *ring_);
        const OpCounts used = ReadCounters() - before;
        EXPECT_EQ(used.external_products, CmuxOracle(bits, 64));
        EXPECT_EQ(LweDecrypt(out, extracted, 4), table[x])
            << "bits " << bits << " x " << x;
      }
    }
  }
}

TEST_F(LutFixture, RejectsWrongIndexWidth) {
  std::vector<uint8_t> table(256, 1);
  const PackedLut lut = BuildPackedLut(table, 8, 4, *ring_);
  const std::vector<RgswCiphertext> index = EncryptIndex(3, 7);
  try {
    LutEval(lut, index, *ring_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompatibleParams);
  }
}

}  // namespace
}  // namespace lutpsi
