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

#include "lutpsi/params.h"

#include <gtest/gtest.h>

#include <string>

#include "lutpsi/error.h"
#include "oracles.h"

namespace lutpsi {
namespace {

struct TableRow {
  const char* name;
  uint64_t n, q, ring_dim;
  int log_q;
  uint64_t b_ks, b_g, b_r;
};

// Published parameter table.
const TableRow kTable[] = {
    {"MEDIUM", 256, 512, 1024, 27, 25, 1 << 9, 23},
    {"STD128_AP", 512, 512, 1024, 27, 25, 1 << 9, 23},
    {"STD192", 512, 512, 2048, 37, 25, 1 << 13, 23},
    {"STD256", 1024, 1024, 2048, 29, 25, 1 << 10, 32},
    {"STD192Q", 1024, 1024, 2048, 35, 25, 1 << 12, 32},
    {"STD256Q", 1024, 1024, 2048, 27, 25, 1 << 7, 32},
};

ErrorCode CodeOf(const ParameterSet& p) {
  try {
    Validate(p);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected Validate to throw";
  return ErrorCode::kNotFound;
}

TEST(ParamsTest, TableRowsMatch) {
  for (const TableRow& row : kTable) {
    SCOPED_TRACE(row.name);
    const ParameterSet p = BuiltinParams(row.name);
    EXPECT_EQ(p.name, row.name);
    EXPECT_EQ(p.lwe_dim, row.n);
    EXPECT_EQ(p.lwe_modulus, row.q);
    EXPECT_EQ(p.ring_dim, row.ring_dim);
    EXPECT_EQ(oracle::BitLength(p.ring_modulus), row.log_q);
    EXPECT_EQ(p.lwe_ks_base, row.b_ks);
    EXPECT_EQ(p.gadget_base, row.b_g);
    EXPECT_EQ(p.acc_base, row.b_r);
    EXPECT_EQ(p.plaintext_modulus, 4u);
    EXPECT_DOUBLE_EQ(p.sigma, 3.19);
  }
}

TEST(ParamsTest, RingModulusIsSmallestNttPrime) {
  for (const TableRow& row : kTable) {
    SCOPED_TRACE(row.name);
    const ParameterSet p = BuiltinParams(row.name);
    EXPECT_EQ(p.ring_modulus, oracle::NttPrime(row.log_q, row.ring_dim));
    EXPECT_EQ(FindNttPrime(row.log_q, row.ring_dim), p.ring_modulus);
  }
}

TEST(ParamsTest, PsiSet) {
  const ParameterSet p = BuiltinParams("PSI2048");
  EXPECT_EQ(p.ring_dim, 2048u);
  EXPECT_EQ(oracle::BitLength(p.ring_modulus), 54);
  EXPECT_EQ(p.ring_modulus, oracle::NttPrime(54, 2048));
  EXPECT_DOUBLE_EQ(p.sigma, 3.19);
  EXPECT_EQ(p.gadget_base, 512u);
  EXPECT_EQ(p.rlwe_ks_base, 512u);
  EXPECT_EQ(p.gadget_digits(), 6u);

  ParameterSet other = PsiParams(2048);
  EXPECT_EQ(other.name, "PSI2048");
  other.name = p.name;
  EXPECT_EQ(other, p);
}

TEST(ParamsTest, EveryBuiltinValidates) {
  EXPECT_EQ(BuiltinParamNames().size(), 7u);
  for (const std::string& name : BuiltinParamNames()) {
    SCOPED_TRACE(name);
    EXPECT_NO_THROW(Validate(BuiltinParams(name)));
  }
}

TEST(ParamsTest, DigitCountsBracketModulus) {
  for (const std::string& name : BuiltinParamNames()) {
    SCOPED_TRACE(name);
    const ParameterSet p = BuiltinParams(name);
    const struct {
      uint64_t base, modulus;
      size_t digits;
    } cases[] = {
        {p.gadget_base, p.ring_modulus, p.gadget_digits()},
        {p.lwe_ks_base, p.ring_modulus, p.lwe_ks_digits()},
        {p.acc_base, p.lwe_modulus, p.acc_digits()},
        {p.rlwe_ks_base, p.ring_modulus, p.rlwe_ks_digits()},
    };
    for (const auto& c : cases) {
      oracle::u128 pow = 1;
      for (size_t i = 0; i + 1 < c.digits; ++i) pow *= c.base;
      EXPECT_LT(pow, c.modulus);          // B^(d-1) < Q
      EXPECT_GE(pow * c.base, c.modulus);  // B^d >= Q
    }
  }
}

TEST(ParamsTest, MediumDigitCounts) {
  const ParameterSet p = BuiltinParams("MEDIUM");
  // 2^27 needs three base-2^9 digits; 512 needs two base-23 digits.
  EXPECT_EQ(p.gadget_digits(), 3u);
  EXPECT_EQ(p.acc_digits(), 2u);
}

TEST(ParamsTest, UnknownNameIsNotFound) {
  try {
    BuiltinParams("MEDIUM2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(ParamsTest, EachInvariantHasItsOwnCode) {
  const ParameterSet base = BuiltinParams("MEDIUM");
  ParameterSet p = base;
  p.ring_dim = 1000;
  EXPECT_EQ(CodeOf(p), ErrorCode::kNotPowerOfTwo);

  p = base;
  p.ring_modulus += 1;  // even
  EXPECT_EQ(CodeOf(p), ErrorCode::kNttUnfriendly);

  p = base;
  p.ring_modulus = oracle::NttPrime(56, p.ring_dim);
  EXPECT_EQ(CodeOf(p), ErrorCode::kModulusTooLarge);

  p = base;
  p.lwe_modulus = 4096;  // > 2N
  EXPECT_EQ(CodeOf(p), ErrorCode::kLweModulusInvalid);

  p = base;
  p.lwe_modulus = 500;
  EXPECT_EQ(CodeOf(p), ErrorCode::kLweModulusInvalid);

  p = base;
  p.plaintext_modulus = 3;
  EXPECT_EQ(CodeOf(p), ErrorCode::kPlaintextModulusInvalid);

  p = base;
  p.gadget_base = 500;
  EXPECT_EQ(CodeOf(p), ErrorCode::kGadgetBaseInvalid);

  p = base;
  p.acc_base = 1;
  EXPECT_EQ(CodeOf(p), ErrorCode::kDecompositionBaseInvalid);

  p = base;
  p.sigma = 0;
  EXPECT_EQ(CodeOf(p), ErrorCode::kInvalidSigma);

  p = base;
  p.lwe_dim = 0;
  EXPECT_EQ(CodeOf(p), ErrorCode::kInvalidDimension);
}

TEST(ParamsTest, FormatListsFields) {
  const std::string text = FormatParams(BuiltinParams("MEDIUM"));
  EXPECT_NE(text.find("name=MEDIUM\n"), std::string::npos);
  EXPECT_NE(text.find("n=256\n"), std::string::npos);
  EXPECT_NE(text.find("N=1024\n"), std::string::npos);
  EXPECT_NE(text.find("B_r=23\n"), std::string::npos);
}

}  // namespace
}  // namespace lutpsi
