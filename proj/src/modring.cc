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

#include "lutpsi/modring.h"

#include <string>

#include "lutpsi/error.h"

namespace lutpsi {
namespace {

// floor((x * f) / 2^shift) for a 128-bit x, a 64-bit f and shift < 192.
uint128 MulShiftRight(uint128 x, uint64_t f, int shift) {
  uint128 p0 = static_cast<uint128>(static_cast<uint64_t>(x)) * f;
  uint128 p1 = static_cast<uint128>(static_cast<uint64_t>(x >> 64)) * f;
  uint64_t w0 = static_cast<uint64_t>(p0);
  uint128 mid = (p0 >> 64) + static_cast<uint64_t>(p1);
  uint64_t w1 = static_cast<uint64_t>(mid);
  uint64_t w2 = static_cast<uint64_t>(p1 >> 64) +
                static_cast<uint64_t>(mid >> 64);
  if (shift >= 128) return static_cast<uint128>(w2 >> (shift - 128));
  uint128 low = (static_cast<uint128>(w1) << 64) | w0;
  if (shift == 0) return low;
  return (static_cast<uint128>(w2) << (128 - shift)) | (low >> shift);
}

}  // namespace

BarrettContext::BarrettContext(uint64_t modulus) : modulus_(modulus) {
  if (modulus < 2 || modulus >= kMaxModulus) {
    throw Error(ErrorCode::kModulusTooLarge,
                "Barrett modulus out of range: " + std::to_string(modulus));
  }
  width_ = std::bit_width(modulus);
  factor_ = static_cast<uint64_t>((static_cast<uint128>(1) << (2 * width_)) /
                                  modulus);
  uint128 wide;
  if (IsPowerOfTwo(modulus)) {
    wide = static_cast<uint128>(1) << (128 - Log2Exact(modulus));
  } else {
    wide = ~static_cast<uint128>(0) / modulus;
  }
  wide_factor_hi_ = static_cast<uint64_t>(wide >> 64);
  wide_factor_lo_ = static_cast<uint64_t>(wide);
}

uint64_t BarrettContext::Reduce(uint128 x) const {
  uint128 estimate = MulShiftRight(x, factor_, 2 * width_);
  uint64_t r = static_cast<uint64_t>(x - estimate * modulus_);
  return r >= modulus_ ? r - modulus_ : r;
}

uint64_t BarrettContext::ReduceWide(uint128 x) const {
  uint64_t xl = static_cast<uint64_t>(x);
  uint64_t xh = static_cast<uint64_t>(x >> 64);
  uint128 ll = static_cast<uint128>(xl) * wide_factor_lo_;
  uint128 lh = static_cast<uint128>(xl) * wide_factor_hi_;
  uint128 hl = static_cast<uint128>(xh) * wide_factor_lo_;
  uint128 hh = static_cast<uint128>(xh) * wide_factor_hi_;
  uint128 mid = (ll >> 64) + static_cast<uint64_t>(lh) +
                static_cast<uint64_t>(hl);
  uint128 estimate = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
  uint64_t r = static_cast<uint64_t>(x - estimate * modulus_);
  return r >= modulus_ ? r - modulus_ : r;
}

uint64_t BarrettContext::Pow(uint64_t base, uint64_t exponent) const {
  uint64_t result = 1 % modulus_;
  base %= modulus_;
  while (exponent > 0) {
    if (exponent & 1) result = Mul(result, base);
    base = Mul(base, base);
    exponent >>= 1;
  }
  return result;
}

uint64_t BarrettContext::Inverse(uint64_t a) const {
  // Extended Euclid over signed 128-bit intermediates.
  __int128 t = 0, new_t = 1;
  __int128 r = modulus_, new_r = a % modulus_;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) {
    throw Error(ErrorCode::kOutOfRange,
                std::to_string(a) + " is not invertible mod " +
                    std::to_string(modulus_));
  }
  if (t < 0) t += modulus_;
  return static_cast<uint64_t>(t);
}

uint64_t BarrettContext::FromSigned(int64_t v) const {
  int64_t m = static_cast<int64_t>(modulus_);
  int64_t r = v % m;
  return static_cast<uint64_t>(r < 0 ? r + m : r);
}

size_t DigitCount(uint64_t base, uint64_t modulus) {
  if (base < 2) {
    throw Error(ErrorCode::kDecompositionBaseInvalid,
                "decomposition base must be at least 2");
  }
  size_t digits = 1;
  uint128 power = base;
  while (power < modulus) {
    power *= base;
    ++digits;
  }
  return digits;
}

void GadgetDecomposeInto(uint64_t v, uint64_t base, std::span<uint64_t> out) {
  for (auto& d : out) {
    d = v % base;
    v /= base;
  }
  if (v != 0) {
    throw Error(ErrorCode::kOutOfRange,
                "value does not fit in " + std::to_string(out.size()) +
                    " base-" + std::to_string(base) + " digits");
  }
}

std::vector<uint64_t> GadgetDecompose(uint64_t v, uint64_t base,
                                      size_t digits) {
  std::vector<uint64_t> out(digits);
  GadgetDecomposeInto(v, base, out);
  return out;
}

uint64_t GadgetRecompose(std::span<const uint64_t> digits, uint64_t base) {
  uint64_t value = 0;
  for (size_t j = digits.size(); j-- > 0;) value = value * base + digits[j];
  return value;
}

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto mulmod = [n](uint64_t a, uint64_t b) {
    return static_cast<uint64_t>(static_cast<uint128>(a) * b % n);
  };
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = 1, base = a, e = d;
    while (e > 0) {
      if (e & 1) x = mulmod(x, base);
      base = mulmod(base, base);
      e >>= 1;
    }
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace lutpsi
