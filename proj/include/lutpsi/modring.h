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

// Scalar arithmetic modulo a word-sized integer.
//
// Residues are plain uint64_t values in [0, modulus); the modulus lives in a
// BarrettContext rather than in each element. Multiplication goes through
// Barrett reduction with the constant floor(2^(2w) / modulus), w being the bit
// width of the modulus, followed by a single conditional subtraction.

#ifndef LUTPSI_MODRING_H_
#define LUTPSI_MODRING_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lutpsi {

using uint128 = unsigned __int128;

// Largest modulus accepted by BarrettContext. Keeps the Barrett factor inside
// one machine word and leaves headroom for lazy (< 4m) butterfly values.
inline constexpr uint64_t kMaxModulus = uint64_t{1} << 62;

class BarrettContext {
 public:
  // Requires 2 <= modulus < kMaxModulus.
  explicit BarrettContext(uint64_t modulus);

  uint64_t modulus() const { return modulus_; }
  int width() const { return width_; }
  uint64_t factor() const { return factor_; }

  // x mod modulus for x < 2^(2w); covers every product of two residues.
  uint64_t Reduce(uint128 x) const;

  // x mod modulus for any 128-bit x. Used for lazily accumulated dot
  // products whose sum exceeds modulus^2.
  uint64_t ReduceWide(uint128 x) const;

  // x mod modulus for any 64-bit x.
  uint64_t ReduceWord(uint64_t x) const {
    uint64_t estimate = static_cast<uint64_t>(
        (static_cast<uint128>(x) * wide_factor_hi_) >> 64);
    uint64_t r = x - estimate * modulus_;
    return r >= modulus_ ? r - modulus_ : r;
  }

  uint64_t Mul(uint64_t a, uint64_t b) const {
    return Reduce(static_cast<uint128>(a) * b);
  }
  uint64_t Add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= modulus_ ? s - modulus_ : s;
  }
  uint64_t Sub(uint64_t a, uint64_t b) const {
    return a >= b ? a - b : a + (modulus_ - b);
  }
  uint64_t Neg(uint64_t a) const { return a == 0 ? 0 : modulus_ - a; }

  uint64_t Pow(uint64_t base, uint64_t exponent) const;

  // Throws kOutOfRange when a has no inverse.
  uint64_t Inverse(uint64_t a) const;

  uint64_t FromSigned(int64_t v) const;

  // Representative in (-modulus/2, modulus/2].
  int64_t Centered(uint64_t v) const {
    return v > modulus_ / 2 ? static_cast<int64_t>(v) -
                                  static_cast<int64_t>(modulus_)
                            : static_cast<int64_t>(v);
  }

 private:
  uint64_t modulus_;
  int width_;
  uint64_t factor_;
  uint64_t wide_factor_hi_;
  uint64_t wide_factor_lo_;
};

// Shoup multiplication by a fixed operand w < m: precompute
// floor(w * 2^64 / m) once, then MulShoupLazy returns x*w mod m in [0, 2m)
// for any 64-bit x.
inline uint64_t ShoupPrecompute(uint64_t w, uint64_t m) {
  return static_cast<uint64_t>((static_cast<uint128>(w) << 64) / m);
}

inline uint64_t MulShoupLazy(uint64_t x, uint64_t w, uint64_t w_shoup,
                             uint64_t m) {
  uint64_t q = static_cast<uint64_t>((static_cast<uint128>(x) * w_shoup) >> 64);
  return x * w - q * m;
}

inline bool IsPowerOfTwo(uint64_t x) { return std::has_single_bit(x); }

inline int Log2Exact(uint64_t x) { return std::countr_zero(x); }

// Smallest d >= 1 with base^d >= modulus.
size_t DigitCount(uint64_t base, uint64_t modulus);

// Unsigned positional digits of v: d[j] in [0, base) with
// sum d[j] * base^j = v. Throws kOutOfRange if v >= base^digits.
std::vector<uint64_t> GadgetDecompose(uint64_t v, uint64_t base,
                                      size_t digits);
void GadgetDecomposeInto(uint64_t v, uint64_t base, std::span<uint64_t> out);
uint64_t GadgetRecompose(std::span<const uint64_t> digits, uint64_t base);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool IsPrime(uint64_t n);

}  // namespace lutpsi

#endif  // LUTPSI_MODRING_H_
