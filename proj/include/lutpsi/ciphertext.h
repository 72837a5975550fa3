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

// LWE, RLWE and RGSW ciphertexts and the operations between them.
//
// Conventions:
//   LWE  (a, b)   with b - <a, s> = e + mu (mod q)
//   RLWE (a, b)   with b - a*z    = e + m  (mod Q)
//   RGSW (c0, c1) with row j of c1 encrypting B^j * m and row j of c0
//                 encrypting -z * m * B^j, both at scale 1.
// RGSW and key-switching rows are stored in the NTT domain. Ciphertexts fed
// to an external product or key switch are decomposed in the coefficient
// domain.

#ifndef LUTPSI_CIPHERTEXT_H_
#define LUTPSI_CIPHERTEXT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lutpsi/polyring.h"
#include "lutpsi/sampler.h"

namespace lutpsi {

// How the left operand of a gadget product is split into digits.
// kUnsigned: digits in [0, B). kBalanced: digits in [-B/2, B/2) applied to
// the centered representative, giving a quarter of the digit variance.
enum class DigitStyle { kUnsigned, kBalanced };

// Signed small integers; binary for gate keys, ternary for keys derived from
// an RLWE secret.
struct LweSecretKey {
  std::vector<int64_t> s;
};

struct RlweSecretKey {
  std::vector<int64_t> coeffs;  // in {-1, 0, 1}
  Polynomial z;                 // coefficient domain, mod Q
  Polynomial z_ntt;
};

struct LweCiphertext {
  std::vector<uint64_t> a;
  uint64_t b = 0;
  uint64_t modulus = 0;

  size_t dim() const { return a.size(); }
  bool operator==(const LweCiphertext&) const = default;
};

struct RlweCiphertext {
  Polynomial a;
  Polynomial b;

  Domain domain() const { return a.domain; }
  bool operator==(const RlweCiphertext&) const = default;
};

struct RlwePrimeVector {
  uint64_t base = 0;
  std::vector<RlweCiphertext> rows;

  bool operator==(const RlwePrimeVector&) const = default;
};

struct RgswCiphertext {
  RlwePrimeVector c0;  // -z * m
  RlwePrimeVector c1;  // m

  bool operator==(const RgswCiphertext&) const = default;
};

// Row j encrypts B^j * z1 under z2.
struct RlweKeySwitchKey {
  uint64_t base = 0;
  std::vector<RlweCiphertext> rows;

  bool operator==(const RlweKeySwitchKey&) const = default;
};

// Entry (i, j) is an LWE encryption under the target key of B^j * from[i],
// all modulo `modulus`, stored as to_dim mask words followed by b.
struct LweKeySwitchKey {
  size_t from_dim = 0;
  size_t to_dim = 0;
  uint64_t base = 0;
  size_t digits = 0;
  uint64_t modulus = 0;
  std::vector<uint64_t> data;

  const uint64_t* entry(size_t i, size_t j) const {
    return data.data() + (i * digits + j) * (to_dim + 1);
  }
};

// round(num / den) with ties rounded up; den > 0.
uint64_t RoundDiv(uint128 num, uint128 den);

// ---- Keys -----------------------------------------------------------------

LweSecretKey GenerateLweKey(size_t n, NoiseSampler& sampler);
RlweSecretKey GenerateRlweKey(const RingContext& ring, NoiseSampler& sampler);
RlweSecretKey RlweKeyFromCoeffs(const RingContext& ring,
                                std::vector<int64_t> coeffs);
// The RLWE secret read as a length-N LWE key (index-0 extraction key).
LweSecretKey ExtractedKey(const RlweSecretKey& key);

// ---- LWE --------------------------------------------------------------------

// Encrypts the raw phase mu (mod modulus).
LweCiphertext LweEncryptPhase(uint64_t mu, const LweSecretKey& key,
                              uint64_t modulus, NoiseSampler& sampler);
// Encrypts m in [0, t) as round(m * modulus / t).
LweCiphertext LweEncrypt(uint64_t m, uint64_t t, const LweSecretKey& key,
                         uint64_t modulus, NoiseSampler& sampler);
// b - <a, s> mod modulus.
uint64_t LwePhase(const LweCiphertext& c, const LweSecretKey& key);
// round(phase * t / modulus) mod t.
uint64_t LweDecrypt(const LweCiphertext& c, const LweSecretKey& key,
                    uint64_t t);
LweCiphertext LweAdd(const LweCiphertext& x, const LweCiphertext& y);
LweCiphertext LweSub(const LweCiphertext& x, const LweCiphertext& y);
void LweAddConstant(LweCiphertext& c, uint64_t value);

// ---- RLWE -------------------------------------------------------------------

// Encrypts m (coefficients already mod Q, scale 1).
RlweCiphertext RlweEncrypt(const Polynomial& m, const RlweSecretKey& key,
                           const RingContext& ring, NoiseSampler& sampler,
                           Domain out = Domain::kCoefficient);
// Encrypts m (coefficients in [0, t)) at scale round(Q / t).
RlweCiphertext RlweEncryptScaled(std::span<const uint64_t> m, uint64_t t,
                                 const RlweSecretKey& key,
                                 const RingContext& ring,
                                 NoiseSampler& sampler);
// [0, m] in the domain of m.
RlweCiphertext RlweTrivial(const Polynomial& m);
RlweCiphertext RlweZero(const RingContext& ring,
                        Domain d = Domain::kCoefficient);
// b - a*z in the coefficient domain.
Polynomial RlwePhase(const RlweCiphertext& c, const RlweSecretKey& key,
                     const RingContext& ring);
// Per-coefficient round(phase * t / Q) mod t.
std::vector<uint64_t> RlweDecrypt(const RlweCiphertext& c,
                                  const RlweSecretKey& key, uint64_t t,
                                  const RingContext& ring);

RlweCiphertext RlweAdd(const RlweCiphertext& x, const RlweCiphertext& y,
                       const RingContext& ring);
RlweCiphertext RlweSub(const RlweCiphertext& x, const RlweCiphertext& y,
                       const RingContext& ring);
void RlweAddInPlace(RlweCiphertext& x, const RlweCiphertext& y,
                    const RingContext& ring);
RlweCiphertext RlweScalarMul(const RlweCiphertext& c, uint64_t scalar,
                             const RingContext& ring);
// X^e * c; coefficient domain.
RlweCiphertext RlweMultiplyMonomial(const RlweCiphertext& c, int64_t e,
                                    const RingContext& ring);
RlweCiphertext RlweToNtt(RlweCiphertext c, const RingContext& ring);
RlweCiphertext RlweToCoefficient(RlweCiphertext c, const RingContext& ring);

// LWE ciphertext of coefficient `index` (dimension N, modulus Q) under
// ExtractedKey. Throws kOutOfRange for index >= N.
LweCiphertext ExtractLwe(const RlweCiphertext& c, size_t index,
                         const RingContext& ring);

// ---- RGSW -------------------------------------------------------------------

RgswCiphertext RgswEncrypt(const Polynomial& m, const RlweSecretKey& key,
                           uint64_t base, const RingContext& ring,
                           NoiseSampler& sampler);
// RGSW of the constant polynomial `value` (mod Q).
RgswCiphertext RgswEncryptConstant(uint64_t value, const RlweSecretKey& key,
                                   uint64_t base, const RingContext& ring,
                                   NoiseSampler& sampler);

// Digit style used when none is given explicitly.
DigitStyle DefaultDigitStyle();

// Digits of every coefficient of `poly` (coefficient domain), written
// digit-major into out[j * N + i], each reduced mod Q.
void DecomposePolynomial(std::span<const uint64_t> poly, uint64_t base,
                         size_t digits, DigitStyle style,
                         const BarrettContext& mod, std::span<uint64_t> out);

// a' . c0 + b' . c1 with (a', b') the gadget digits of c. Output in the
// coefficient domain.
RlweCiphertext ExternalProduct(const RlweCiphertext& c,
                               const RgswCiphertext& g,
                               const RingContext& ring,
                               DigitStyle style = DefaultDigitStyle());

// g (x) (c1 - c0) + c0.
RlweCiphertext Cmux(const RgswCiphertext& g, const RlweCiphertext& c0,
                    const RlweCiphertext& c1, const RingContext& ring,
                    DigitStyle style = DefaultDigitStyle());

// Cmux(g, c, X^-j * c).
RlweCiphertext BlindRotateStep(const RgswCiphertext& g,
                               const RlweCiphertext& c, uint64_t j,
                               const RingContext& ring,
                               DigitStyle style = DefaultDigitStyle());

// ---- Key switching ----------------------------------------------------------

RlweKeySwitchKey GenerateRlweKeySwitchKey(const Polynomial& from_z,
                                          const RlweSecretKey& to,
                                          uint64_t base,
                                          const RingContext& ring,
                                          NoiseSampler& sampler);
// [0, b] - sum_j a_j * K_j. Input and output in the coefficient domain.
RlweCiphertext RlweKeySwitch(const RlweCiphertext& c,
                             const RlweKeySwitchKey& ksk,
                             const RingContext& ring,
                             DigitStyle style = DefaultDigitStyle());

LweKeySwitchKey GenerateLweKeySwitchKey(const LweSecretKey& from,
                                        const LweSecretKey& to, uint64_t base,
                                        uint64_t modulus,
                                        NoiseSampler& sampler);
LweCiphertext LweKeySwitch(const LweCiphertext& c,
                           const LweKeySwitchKey& ksk);

// Entry-wise round(x * target / modulus), ties up.
LweCiphertext LweModSwitch(const LweCiphertext& c, uint64_t target);

}  // namespace lutpsi

#endif  // LUTPSI_CIPHERTEXT_H_
