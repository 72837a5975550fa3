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

// Reference implementations used as test oracles. They are written
// independently of the library (plain loops, 128-bit arithmetic, no NTT, no
// Barrett) and favour obviousness over speed.

#ifndef LUTPSI_TESTS_ORACLES_H_
#define LUTPSI_TESTS_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

namespace lutpsi {
namespace oracle {

using u128 = unsigned __int128;

inline uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

inline uint64_t PowMod(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) r = MulMod(r, base, m);
    base = MulMod(base, base, m);
    e >>= 1;
  }
  return r;
}

inline bool IsPrimeByTrialDivision(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Miller-Rabin with the first twelve primes as bases; exact below 2^64.
inline bool IsPrime(uint64_t n) {
  static const uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (uint64_t a : kBases) {
    uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Smallest prime >= 2^(bits-1) that is 1 mod 2N, by linear search.
inline uint64_t NttPrime(int bits, uint64_t n) {
  const uint64_t step = 2 * n;
  uint64_t q = (uint64_t{1} << (bits - 1));
  while (q % step != 1) ++q;
  while (!IsPrime(q)) q += step;
  return q;
}

// Bits needed to write x.
inline int BitLength(uint64_t x) {
  int b = 0;
  while (x != 0) {
    ++b;
    x >>= 1;
  }
  return b;
}

// Naive negacyclic convolution in Z_q[X]/(X^N + 1).
inline std::vector<uint64_t> NegacyclicMul(const std::vector<uint64_t>& a,
                                           const std::vector<uint64_t>& b,
                                           uint64_t q) {
  const size_t n = a.size();
  std::vector<uint64_t> out(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const uint64_t p = MulMod(a[i], b[j], q);
      const size_t k = i + j;
      if (k < n) {
        out[k] = (out[k] + p) % q;
      } else {
        out[k - n] = (out[k - n] + q - p) % q;
      }
    }
  }
  return out;
}

// X^e * a in Z_q[X]/(X^N + 1), any integer e.
inline std::vector<uint64_t> MonomialMul(const std::vector<uint64_t>& a,
                                         int64_t e, uint64_t q) {
  const int64_t n = static_cast<int64_t>(a.size());
  const int64_t two_n = 2 * n;
  const int64_t shift = ((e % two_n) + two_n) % two_n;
  std::vector<uint64_t> out(a.size(), 0);
  for (int64_t i = 0; i < n; ++i) {
    int64_t k = i + shift;
    bool negate = false;
    while (k >= n) {
      k -= n;
      negate = !negate;
    }
    out[k] = negate ? (q - a[i]) % q : a[i];
  }
  return out;
}

// a(X^k) in Z_q[X]/(X^N + 1) by expanding every monomial.
inline std::vector<uint64_t> Substitute(const std::vector<uint64_t>& a,
                                        uint64_t k, uint64_t q) {
  const size_t n = a.size();
  std::vector<uint64_t> out(n, 0);
  for (size_t i = 0; i < n; ++i) {
    std::vector<uint64_t> mono(n, 0);
    mono[0] = a[i];
    const std::vector<uint64_t> moved =
        MonomialMul(mono, static_cast<int64_t>((i * k) % (2 * n)), q);
    for (size_t j = 0; j < n; ++j) out[j] = (out[j] + moved[j]) % q;
  }
  return out;
}

// Signed integer v mod q.
inline uint64_t Reduce(int64_t v, uint64_t q) {
  const int64_t m = static_cast<int64_t>(q);
  return static_cast<uint64_t>(((v % m) + m) % m);
}

// Centered representative in (-q/2, q/2].
inline int64_t Centered(uint64_t v, uint64_t q) {
  return v > q / 2 ? static_cast<int64_t>(v) - static_cast<int64_t>(q)
                   : static_cast<int64_t>(v);
}

// sum d[j] * base^j as a 128-bit integer.
inline u128 Recompose(const std::vector<uint64_t>& digits, uint64_t base) {
  u128 v = 0;
  for (size_t j = digits.size(); j-- > 0;) v = v * base + digits[j];
  return v;
}

// Unsigned base-`base` digits by repeated division.
inline std::vector<uint64_t> Digits(uint64_t v, uint64_t base,
                                    size_t count) {
  std::vector<uint64_t> d(count);
  for (size_t j = 0; j < count; ++j) {
    d[j] = v % base;
    v /= base;
  }
  return d;
}

// b - <a, s> mod q for an LWE sample.
inline uint64_t LwePhase(const std::vector<uint64_t>& a, uint64_t b,
                         const std::vector<int64_t>& s, uint64_t q) {
  u128 acc = b % q;
  for (size_t i = 0; i < a.size(); ++i) {
    const uint64_t si = Reduce(s[i], q);
    acc = (acc + q - MulMod(a[i], si, q)) % q;
  }
  return static_cast<uint64_t>(acc);
}

inline std::vector<uint64_t> Intersect(const std::vector<uint64_t>& a,
                                       const std::vector<uint64_t>& b) {
  const std::set<uint64_t> sb(b.begin(), b.end());
  std::set<uint64_t> out;
  for (uint64_t x : a) {
    if (sb.count(x) != 0) out.insert(x);
  }
  return std::vector<uint64_t>(out.begin(), out.end());
}

}  // namespace oracle
}  // namespace lutpsi

#endif  // LUTPSI_TESTS_ORACLES_H_
