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

#include <string>

#include "lutpsi/error.h"

namespace lutpsi {

uint64_t CmuxTreeCount(uint64_t bits, uint64_t ring_dim) {
  const uint64_t log_n = Log2Exact(ring_dim);
  if (bits < log_n) return bits;
  const uint64_t high = bits - log_n;
  const uint64_t tree = high >= 64 ? ~uint64_t{0} : (uint64_t{1} << high) - 1;
  return tree + log_n;
}

LutPosition LutLocate(uint64_t x, const RingContext& ring) {
  return {x >> ring.log_n(), x & (ring.n() - 1)};
}

size_t LutRowCount(size_t bits, const RingContext& ring) {
  const size_t log_n = ring.log_n();
  return bits <= log_n ? 1 : size_t{1} << (bits - log_n);
}

namespace {

std::vector<Polynomial> LutRows(std::span<const uint8_t> table, size_t bits,
                                uint64_t t, const RingContext& ring) {
  if (bits >= 48 || table.size() != (size_t{1} << bits)) {
    throw Error(ErrorCode::kInvalidDimension,
                "table size does not match 2^" + std::to_string(bits));
  }
  const uint64_t scale = RoundDiv(ring.modulus(), t);
  std::vector<Polynomial> rows(LutRowCount(bits, ring), Polynomial(ring.n()));
  for (size_t x = 0; x < table.size(); ++x) {
    if (table[x] >= t) {
      throw Error(ErrorCode::kOutOfRange, "table entry exceeds plaintext");
    }
    const LutPosition pos = LutLocate(x, ring);
    rows[pos.row].coeffs[pos.slot] = ring.mod().Mul(table[x], scale);
  }
  return rows;
}

}  // namespace

PackedLut BuildPackedLut(std::span<const uint8_t> table, size_t bits,
                         uint64_t t, const RingContext& ring) {
  PackedLut lut;
  lut.bits = bits;
  for (Polynomial& row : LutRows(table, bits, t, ring)) {
    lut.rows.push_back(RlweTrivial(row));
  }
  return lut;
}

PackedLut EncryptPackedLut(std::span<const uint8_t> table, size_t bits,
                           uint64_t t, const RlweSecretKey& key,
                           const RingContext& ring, NoiseSampler& sampler) {
  PackedLut lut;
  lut.bits = bits;
  for (Polynomial& row : LutRows(table, bits, t, ring)) {
    lut.rows.push_back(RlweEncrypt(row, key, ring, sampler));
  }
  return lut;
}

LweCiphertext LutEval(const PackedLut& lut,
                      std::span<const RgswCiphertext> index,
                      const RingContext& ring) {
  if (index.size() != lut.bits) {
    throw Error(ErrorCode::kIncompatibleParams,
                "index has " + std::to_string(index.size()) +
                    " bits, table expects " + std::to_string(lut.bits));
  }
  if (lut.rows.size() != LutRowCount(lut.bits, ring)) {
    throw Error(ErrorCode::kIncompatibleParams, "malformed packed table");
  }
  const size_t log_n = ring.log_n();
  const size_t low = lut.bits < log_n ? lut.bits : log_n;

  // Row selection, consuming high bits from the lowest one up.
  std::vector<RlweCiphertext> level = lut.rows;
  for (size_t bit = low; bit < lut.bits; ++bit) {
    std::vector<RlweCiphertext> next;
    next.reserve(level.size() / 2);
    for (size_t r = 0; r + 1 < level.size(); r += 2) {
      next.push_back(Cmux(index[bit], level[r], level[r + 1], ring));
    }
    level = std::move(next);
  }
  RlweCiphertext acc = RlweToCoefficient(std::move(level[0]), ring);

  // Slot selection: bit t rotates by 2^t.
  for (size_t bit = low; bit-- > 0;) {
    acc = BlindRotateStep(index[bit], acc, uint64_t{1} << bit, ring);
  }
  return ExtractLwe(acc, 0, ring);
}

}  // namespace lutpsi
