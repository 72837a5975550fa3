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

// Homomorphic lookup tables with vertical packing.
//
// A table of 2^bits one-bit entries is laid out N entries per RLWE row, so
// that row r slot i holds f(r * N + i). Evaluation selects the row with a
// CMUX tree over the high index bits and moves the slot to position 0 with
// blind rotations over the low bits, then extracts coefficient 0.

#ifndef LUTPSI_HOMLUT_H_
#define LUTPSI_HOMLUT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lutpsi/ciphertext.h"

namespace lutpsi {

// 2^(bits - log2 N) - 1 + log2 N when bits >= log2 N, otherwise bits.
uint64_t CmuxTreeCount(uint64_t bits, uint64_t ring_dim);

struct PackedLut {
  size_t bits = 0;
  std::vector<RlweCiphertext> rows;  // coefficient domain
};

// Row and slot of table index x.
struct LutPosition {
  uint64_t row;
  uint64_t slot;
};
LutPosition LutLocate(uint64_t x, const RingContext& ring);

size_t LutRowCount(size_t bits, const RingContext& ring);

// Noiseless rows holding round(Q / t) * table[x]. table.size() must be
// 2^bits and every entry below t.
PackedLut BuildPackedLut(std::span<const uint8_t> table, size_t bits,
                         uint64_t t, const RingContext& ring);

// Same layout with each row encrypted under `key`.
PackedLut EncryptPackedLut(std::span<const uint8_t> table, size_t bits,
                           uint64_t t, const RlweSecretKey& key,
                           const RingContext& ring, NoiseSampler& sampler);

// index[i] is an RGSW encryption of bit i of x (bit 0 least significant).
// Returns an LWE encryption (dimension N, modulus Q, under ExtractedKey) of
// the table entry at scale round(Q / t). Throws kIncompatibleParams when the
// index width differs from lut.bits.
LweCiphertext LutEval(const PackedLut& lut,
                      std::span<const RgswCiphertext> index,
                      const RingContext& ring);

}  // namespace lutpsi

#endif  // LUTPSI_HOMLUT_H_
