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

// FHEW-style gate bootstrapping.
//
// Bits are LWE-encrypted mod q at scale q/4. A NAND gate adds the two inputs
// plus q/2, so the phase is (m1 + m2 + 2) q/4 + e and the gate output is the
// top bit of m1 + m2 + 2 mod 4. The phase is mapped to a rotation of a test
// vector by X^(phase * 2N/q) inside an RLWE accumulator, using one external
// product per base-B_r digit of every mask coefficient, then extracted,
// key-switched back to dimension n and modulus-switched to q.

#ifndef LUTPSI_BOOTSTRAP_H_
#define LUTPSI_BOOTSTRAP_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lutpsi/ciphertext.h"
#include "lutpsi/params.h"

namespace lutpsi {

enum class Gate { kNand, kAnd };

// Entry (i, p, v) encrypts X^((2N/q) * v * B_r^p * s[i] mod 2N).
struct BootstrapKey {
  size_t lwe_dim = 0;
  size_t digits = 0;  // dr
  uint64_t base = 0;  // B_r
  std::vector<RgswCiphertext> entries;

  const RgswCiphertext& at(size_t i, size_t p, uint64_t v) const {
    return entries[(i * digits + p) * base + v];
  }
};

struct GateSecretKey {
  LweSecretKey lwe;
  RlweSecretKey rlwe;
};

struct GateKeys {
  ParameterSet params;
  std::shared_ptr<const RingContext> ring;
  BootstrapKey bk;
  LweKeySwitchKey ksk;
};

// Bytes held by the bootstrap key's polynomials for this parameter set.
uint64_t BootstrapKeyBytes(const ParameterSet& p);

BootstrapKey GenerateBootstrapKey(const LweSecretKey& s,
                                  const RlweSecretKey& z,
                                  const ParameterSet& p,
                                  const RingContext& ring,
                                  NoiseSampler& sampler);

GateSecretKey GenerateGateSecretKey(const ParameterSet& p,
                                    const RingContext& ring,
                                    NoiseSampler& sampler);
GateKeys GenerateGateKeys(const GateSecretKey& sk, const ParameterSet& p,
                          NoiseSampler& sampler);

// Coefficient i is -round(Q/8) for i <= N/4 and +round(Q/8) otherwise.
// Rotating it by r = phase * 2N/q puts -Q/8 in slot 0 exactly when the
// phase lies in (-q/8, 3q/8), i.e. when m1 + m2 + 2 mod 4 is 0 or 1.
Polynomial NandTestVector(const RingContext& ring);

// Noiseless [0, tv * X^(b * 2N/q)] in the coefficient domain. Throws
// kNotSupported for gates other than NAND.
RlweCiphertext AccInit(uint64_t b, Gate gate, const ParameterSet& p,
                       const RingContext& ring);

// acc <- acc (x) bk(i, p, v) for every digit v at position p of (q - a[i]).
void Accumulate(RlweCiphertext& acc, std::span<const uint64_t> a,
                const BootstrapKey& bk, const ParameterSet& p,
                const RingContext& ring);

LweCiphertext EncryptBit(uint64_t bit, const GateSecretKey& sk,
                         const ParameterSet& p, NoiseSampler& sampler);
uint64_t DecryptBit(const LweCiphertext& c, const GateSecretKey& sk);

// Centered distance of the phase from its nearest multiple of q/4, in
// units of the LWE modulus.
int64_t BitNoise(const LweCiphertext& c, const GateSecretKey& sk);

LweCiphertext BootstrapNand(const LweCiphertext& c1, const LweCiphertext& c2,
                            const GateKeys& keys);

}  // namespace lutpsi

#endif  // LUTPSI_BOOTSTRAP_H_
