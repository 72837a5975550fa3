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

#include <string>

#include "lutpsi/error.h"

namespace lutpsi {
namespace {

uint64_t RotationScale(const ParameterSet& p) {
  return 2 * p.ring_dim / p.lwe_modulus;
}

}  // namespace

uint64_t BootstrapKeyBytes(const ParameterSet& p) {
  const uint64_t entries = p.lwe_dim * p.acc_digits() * p.acc_base;
  const uint64_t rows = 2 * p.gadget_digits();
  return entries * rows * 2 * p.ring_dim * sizeof(uint64_t);
}

BootstrapKey GenerateBootstrapKey(const LweSecretKey& s,
                                  const RlweSecretKey& z,
                                  const ParameterSet& p,
                                  const RingContext& ring,
                                  NoiseSampler& sampler) {
  if (s.s.size() != p.lwe_dim) {
    throw Error(ErrorCode::kIncompatibleParams, "LWE key length != n");
  }
  BootstrapKey bk;
  bk.lwe_dim = p.lwe_dim;
  bk.digits = p.acc_digits();
  bk.base = p.acc_base;
  bk.entries.reserve(bk.lwe_dim * bk.digits * bk.base);
  const uint64_t two_n = 2 * p.ring_dim;
  const uint64_t scale = RotationScale(p);
  for (size_t i = 0; i < bk.lwe_dim; ++i) {
    const uint64_t si = static_cast<uint64_t>(s.s[i]) % two_n;
    uint64_t position_weight = 1;  // B_r^p mod 2N
    for (size_t pos = 0; pos < bk.digits; ++pos) {
      for (uint64_t v = 0; v < bk.base; ++v) {
        const uint64_t e = (scale * v % two_n) * position_weight % two_n *
                           si % two_n;
        Polynomial monomial(ring.n());
        if (e < ring.n()) {
          monomial.coeffs[e] = 1;
        } else {
          monomial.coeffs[e - ring.n()] = ring.modulus() - 1;
        }
        bk.entries.push_back(
            RgswEncrypt(monomial, z, p.gadget_base, ring, sampler));
      }
      position_weight = position_weight * (bk.base % two_n) % two_n;
    }
  }
  return bk;
}

GateSecretKey GenerateGateSecretKey(const ParameterSet& p,
                                    const RingContext& ring,
                                    NoiseSampler& sampler) {
  GateSecretKey sk;
  sk.lwe = GenerateLweKey(p.lwe_dim, sampler);
  sk.rlwe = GenerateRlweKey(ring, sampler);
  return sk;
}

GateKeys GenerateGateKeys(const GateSecretKey& sk, const ParameterSet& p,
                          NoiseSampler& sampler) {
  GateKeys keys;
  keys.params = p;
  keys.ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  keys.bk = GenerateBootstrapKey(sk.lwe, sk.rlwe, p, *keys.ring, sampler);
  keys.ksk = GenerateLweKeySwitchKey(ExtractedKey(sk.rlwe), sk.lwe,
                                     p.lwe_ks_base, p.ring_modulus, sampler);
  return keys;
}

Polynomial NandTestVector(const RingContext& ring) {
  const uint64_t eighth = RoundDiv(ring.modulus(), 8);
  Polynomial tv(ring.n());
  for (size_t i = 0; i < ring.n(); ++i) {
    tv.coeffs[i] = i <= ring.n() / 4 ? ring.modulus() - eighth : eighth;
  }
  return tv;
}

RlweCiphertext AccInit(uint64_t b, Gate gate, const ParameterSet& p,
                       const RingContext& ring) {
  if (gate != Gate::kNand) {
    throw Error(ErrorCode::kNotSupported, "only NAND is implemented");
  }
  if (b >= p.lwe_modulus) {
    throw Error(ErrorCode::kOutOfRange, "b must be < q");
  }
  Polynomial tv = NandTestVector(ring);
  Polynomial rotated = ring.MultiplyMonomial(
      tv, static_cast<int64_t>(b * RotationScale(p)));
  return RlweTrivial(rotated);
}

void Accumulate(RlweCiphertext& acc, std::span<const uint64_t> a,
                const BootstrapKey& bk, const ParameterSet& p,
                const RingContext& ring) {
  if (a.size() != bk.lwe_dim) {
    throw Error(ErrorCode::kIncompatibleParams,
                "mask length " + std::to_string(a.size()) +
                    " does not match bootstrap key dimension " +
                    std::to_string(bk.lwe_dim));
  }
  const uint64_t q = p.lwe_modulus;
  std::vector<uint64_t> digits(bk.digits);
  for (size_t i = 0; i < bk.lwe_dim; ++i) {
    const uint64_t x = (q - a[i] % q) % q;
    GadgetDecomposeInto(x, bk.base, digits);
    for (size_t pos = 0; pos < bk.digits; ++pos) {
      acc = ExternalProduct(acc, bk.at(i, pos, digits[pos]), ring);
    }
  }
}

LweCiphertext EncryptBit(uint64_t bit, const GateSecretKey& sk,
                         const ParameterSet& p, NoiseSampler& sampler) {
  return LweEncrypt(bit & 1, p.plaintext_modulus, sk.lwe, p.lwe_modulus,
                    sampler);
}

uint64_t DecryptBit(const LweCiphertext& c, const GateSecretKey& sk) {
  return LweDecrypt(c, sk.lwe, 4) & 1;
}

int64_t BitNoise(const LweCiphertext& c, const GateSecretKey& sk) {
  const uint64_t phase = LwePhase(c, sk.lwe);
  const uint64_t quarter = c.modulus / 4;
  const uint64_t nearest =
      RoundDiv(static_cast<uint128>(phase) * 4, c.modulus) % 4 * quarter;
  int64_t diff = static_cast<int64_t>(phase) - static_cast<int64_t>(nearest);
  const int64_t m = static_cast<int64_t>(c.modulus);
  if (diff > m / 2) diff -= m;
  if (diff < -m / 2) diff += m;
  return diff;
}

LweCiphertext BootstrapNand(const LweCiphertext& c1, const LweCiphertext& c2,
                            const GateKeys& keys) {
  const ParameterSet& p = keys.params;
  const RingContext& ring = *keys.ring;
  if (c1.modulus != p.lwe_modulus || c1.dim() != p.lwe_dim) {
    throw Error(ErrorCode::kIncompatibleParams,
                "gate input does not match the parameter set");
  }
  LweCiphertext sum = LweAdd(c1, c2);
  LweAddConstant(sum, p.lwe_modulus / 2);
  RlweCiphertext acc = AccInit(sum.b, Gate::kNand, p, ring);
  Accumulate(acc, sum.a, keys.bk, p, ring);
  LweCiphertext extracted = ExtractLwe(acc, 0, ring);
  LweAddConstant(extracted, RoundDiv(ring.modulus(), 8));
  LweCiphertext switched = LweKeySwitch(extracted, keys.ksk);
  return LweModSwitch(switched, p.lwe_modulus);
}

}  // namespace lutpsi
