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

#include "lutpsi/ciphertext.h"

#include <algorithm>
#include <string>

#include "lutpsi/counters.h"
#include "lutpsi/error.h"

namespace lutpsi {
namespace {

void CheckLwePair(const LweCiphertext& x, const LweCiphertext& y) {
  if (x.modulus != y.modulus || x.dim() != y.dim()) {
    throw Error(ErrorCode::kIncompatibleParams, "LWE shape mismatch");
  }
}

void CheckRow(const RlweCiphertext& c, const RingContext& ring) {
  if (c.a.size() != ring.n() || c.b.size() != ring.n() ||
      c.a.domain != c.b.domain) {
    throw Error(ErrorCode::kIncompatibleParams, "malformed RLWE ciphertext");
  }
}

// Uniform polynomial; uniform in one domain is uniform in the other.
Polynomial SampleUniform(const RingContext& ring, NoiseSampler& sampler,
                         Domain d) {
  Polynomial p(ring.n(), d);
  for (auto& v : p.coeffs) v = sampler.Uniform(ring.modulus());
  return p;
}

Polynomial SampleError(const RingContext& ring, NoiseSampler& sampler) {
  Polynomial p(ring.n());
  for (auto& v : p.coeffs) v = ring.mod().FromSigned(sampler.Gaussian());
  return p;
}

// Fresh encryption of m (coefficient domain) with the result in NTT domain.
RlweCiphertext EncryptNtt(const Polynomial& m, const RlweSecretKey& key,
                          const RingContext& ring, NoiseSampler& sampler) {
  RlweCiphertext c;
  c.a = SampleUniform(ring, sampler, Domain::kNtt);
  Polynomial noisy = ring.Add(m, SampleError(ring, sampler));
  c.b = ring.Add(ring.PointwiseMul(c.a, key.z_ntt), ring.Forward(noisy));
  internal::CountForwardNtts(1);
  return c;
}

// out <- sum_j digits[j] * rows[j] with NTT-domain operands. Products are
// accumulated lazily and reduced once; when every partial sum fits in 64 bits
// the accumulator is a plain word, otherwise 128 bits.
void GadgetInnerProduct(const uint64_t* digits,
                        std::span<const RlweCiphertext* const> rows,
                        const RingContext& ring, RlweCiphertext& out) {
  const size_t n = ring.n();
  const uint64_t q = ring.modulus();
  out.a.coeffs.assign(n, 0);
  out.b.coeffs.assign(n, 0);
  out.a.domain = out.b.domain = Domain::kNtt;
  uint64_t* __restrict acc_a = out.a.coeffs.data();
  uint64_t* __restrict acc_b = out.b.coeffs.data();
  const uint128 bound = static_cast<uint128>(q - 1) * (q - 1) * rows.size();
  if (bound >> 64 == 0) {
    for (size_t j = 0; j < rows.size(); ++j) {
      const uint64_t* __restrict d = digits + j * n;
      const uint64_t* __restrict ra = rows[j]->a.coeffs.data();
      const uint64_t* __restrict rb = rows[j]->b.coeffs.data();
      for (size_t i = 0; i < n; ++i) {
        acc_a[i] += d[i] * ra[i];
        acc_b[i] += d[i] * rb[i];
      }
    }
    for (size_t i = 0; i < n; ++i) {
      acc_a[i] = ring.mod().ReduceWord(acc_a[i]);
      acc_b[i] = ring.mod().ReduceWord(acc_b[i]);
    }
    return;
  }
  thread_local std::vector<uint128> wide;
  wide.assign(2 * n, 0);
  uint128* __restrict wa = wide.data();
  uint128* __restrict wb = wide.data() + n;
  for (size_t j = 0; j < rows.size(); ++j) {
    const uint64_t* d = digits + j * n;
    const uint64_t* ra = rows[j]->a.coeffs.data();
    const uint64_t* rb = rows[j]->b.coeffs.data();
    for (size_t i = 0; i < n; ++i) {
      wa[i] += static_cast<uint128>(d[i]) * ra[i];
      wb[i] += static_cast<uint128>(d[i]) * rb[i];
    }
  }
  for (size_t i = 0; i < n; ++i) {
    acc_a[i] = ring.mod().ReduceWide(wa[i]);
    acc_b[i] = ring.mod().ReduceWide(wb[i]);
  }
}

thread_local std::vector<uint64_t> scratch_digits;

}  // namespace

uint64_t RoundDiv(uint128 num, uint128 den) {
  return static_cast<uint64_t>((2 * num + den) / (2 * den));
}

DigitStyle DefaultDigitStyle() { return DigitStyle::kBalanced; }

// ---- Keys -------------------------------------------------------------------

LweSecretKey GenerateLweKey(size_t n, NoiseSampler& sampler) {
  LweSecretKey key;
  key.s.resize(n);
  for (auto& v : key.s) v = sampler.Binary();
  return key;
}

RlweSecretKey RlweKeyFromCoeffs(const RingContext& ring,
                                std::vector<int64_t> coeffs) {
  RlweSecretKey key;
  key.z = ring.FromSigned(coeffs);
  key.z_ntt = ring.Forward(key.z);
  key.coeffs = std::move(coeffs);
  return key;
}

RlweSecretKey GenerateRlweKey(const RingContext& ring, NoiseSampler& sampler) {
  std::vector<int64_t> coeffs(ring.n());
  for (auto& v : coeffs) v = sampler.Ternary();
  return RlweKeyFromCoeffs(ring, std::move(coeffs));
}

LweSecretKey ExtractedKey(const RlweSecretKey& key) {
  return LweSecretKey{key.coeffs};
}

// ---- LWE --------------------------------------------------------------------

LweCiphertext LweEncryptPhase(uint64_t mu, const LweSecretKey& key,
                              uint64_t modulus, NoiseSampler& sampler) {
  BarrettContext mod(modulus);
  LweCiphertext c;
  c.modulus = modulus;
  c.a.resize(key.s.size());
  uint64_t dot = 0;
  for (size_t i = 0; i < key.s.size(); ++i) {
    c.a[i] = sampler.Uniform(modulus);
    dot = mod.Add(dot, mod.Mul(c.a[i], mod.FromSigned(key.s[i])));
  }
  c.b = mod.Add(mod.Add(dot, mod.FromSigned(sampler.Gaussian())), mu % modulus);
  return c;
}

LweCiphertext LweEncrypt(uint64_t m, uint64_t t, const LweSecretKey& key,
                         uint64_t modulus, NoiseSampler& sampler) {
  uint64_t mu = RoundDiv(static_cast<uint128>(m % t) * modulus, t) % modulus;
  return LweEncryptPhase(mu, key, modulus, sampler);
}

uint64_t LwePhase(const LweCiphertext& c, const LweSecretKey& key) {
  if (c.dim() != key.s.size()) {
    throw Error(ErrorCode::kIncompatibleParams,
                "LWE dimension " + std::to_string(c.dim()) +
                    " does not match key length " +
                    std::to_string(key.s.size()));
  }
  BarrettContext mod(c.modulus);
  uint64_t dot = 0;
  for (size_t i = 0; i < c.dim(); ++i) {
    dot = mod.Add(dot, mod.Mul(c.a[i], mod.FromSigned(key.s[i])));
  }
  return mod.Sub(c.b, dot);
}

uint64_t LweDecrypt(const LweCiphertext& c, const LweSecretKey& key,
                    uint64_t t) {
  uint64_t phase = LwePhase(c, key);
  return RoundDiv(static_cast<uint128>(phase) * t, c.modulus) % t;
}

LweCiphertext LweAdd(const LweCiphertext& x, const LweCiphertext& y) {
  CheckLwePair(x, y);
  BarrettContext mod(x.modulus);
  LweCiphertext out = x;
  for (size_t i = 0; i < x.dim(); ++i) out.a[i] = mod.Add(x.a[i], y.a[i]);
  out.b = mod.Add(x.b, y.b);
  return out;
}

LweCiphertext LweSub(const LweCiphertext& x, const LweCiphertext& y) {
  CheckLwePair(x, y);
  BarrettContext mod(x.modulus);
  LweCiphertext out = x;
  for (size_t i = 0; i < x.dim(); ++i) out.a[i] = mod.Sub(x.a[i], y.a[i]);
  out.b = mod.Sub(x.b, y.b);
  return out;
}

void LweAddConstant(LweCiphertext& c, uint64_t value) {
  c.b = (c.b + value % c.modulus) % c.modulus;
}

// ---- RLWE -------------------------------------------------------------------

RlweCiphertext RlweEncrypt(const Polynomial& m, const RlweSecretKey& key,
                           const RingContext& ring, NoiseSampler& sampler,
                           Domain out) {
  RlweCiphertext c = EncryptNtt(ring.ToCoefficient(m), key, ring, sampler);
  return out == Domain::kNtt ? c : RlweToCoefficient(std::move(c), ring);
}

RlweCiphertext RlweEncryptScaled(std::span<const uint64_t> m, uint64_t t,
                                 const RlweSecretKey& key,
                                 const RingContext& ring,
                                 NoiseSampler& sampler) {
  if (m.size() != ring.n()) {
    throw Error(ErrorCode::kIncompatibleParams, "plaintext length mismatch");
  }
  Polynomial scaled(ring.n());
  for (size_t i = 0; i < ring.n(); ++i) {
    scaled.coeffs[i] =
        RoundDiv(static_cast<uint128>(m[i] % t) * ring.modulus(), t) %
        ring.modulus();
  }
  return RlweEncrypt(scaled, key, ring, sampler);
}

RlweCiphertext RlweTrivial(const Polynomial& m) {
  return RlweCiphertext{Polynomial(m.size(), m.domain), m};
}

RlweCiphertext RlweZero(const RingContext& ring, Domain d) {
  return RlweCiphertext{Polynomial(ring.n(), d), Polynomial(ring.n(), d)};
}

Polynomial RlwePhase(const RlweCiphertext& c, const RlweSecretKey& key,
                     const RingContext& ring) {
  CheckRow(c, ring);
  Polynomial az = ring.PointwiseMul(ring.ToNtt(c.a), key.z_ntt);
  Polynomial phase = ring.Sub(ring.ToNtt(c.b), az);
  return ring.Inverse(phase);
}

std::vector<uint64_t> RlweDecrypt(const RlweCiphertext& c,
                                  const RlweSecretKey& key, uint64_t t,
                                  const RingContext& ring) {
  Polynomial phase = RlwePhase(c, key, ring);
  std::vector<uint64_t> out(ring.n());
  for (size_t i = 0; i < ring.n(); ++i) {
    out[i] = RoundDiv(static_cast<uint128>(phase.coeffs[i]) * t,
                      ring.modulus()) %
             t;
  }
  return out;
}

RlweCiphertext RlweAdd(const RlweCiphertext& x, const RlweCiphertext& y,
                       const RingContext& ring) {
  return RlweCiphertext{ring.Add(x.a, y.a), ring.Add(x.b, y.b)};
}

RlweCiphertext RlweSub(const RlweCiphertext& x, const RlweCiphertext& y,
                       const RingContext& ring) {
  return RlweCiphertext{ring.Sub(x.a, y.a), ring.Sub(x.b, y.b)};
}

void RlweAddInPlace(RlweCiphertext& x, const RlweCiphertext& y,
                    const RingContext& ring) {
  ring.AddInPlace(x.a, y.a);
  ring.AddInPlace(x.b, y.b);
}

RlweCiphertext RlweScalarMul(const RlweCiphertext& c, uint64_t scalar,
                             const RingContext& ring) {
  return RlweCiphertext{ring.ScalarMul(c.a, scalar),
                        ring.ScalarMul(c.b, scalar)};
}

RlweCiphertext RlweMultiplyMonomial(const RlweCiphertext& c, int64_t e,
                                    const RingContext& ring) {
  return RlweCiphertext{ring.MultiplyMonomial(c.a, e),
                        ring.MultiplyMonomial(c.b, e)};
}

RlweCiphertext RlweToNtt(RlweCiphertext c, const RingContext& ring) {
  if (c.domain() == Domain::kCoefficient) internal::CountForwardNtts(2);
  c.a = ring.ToNtt(std::move(c.a));
  c.b = ring.ToNtt(std::move(c.b));
  return c;
}

RlweCiphertext RlweToCoefficient(RlweCiphertext c, const RingContext& ring) {
  if (c.domain() == Domain::kNtt) internal::CountInverseNtts(2);
  c.a = ring.ToCoefficient(std::move(c.a));
  c.b = ring.ToCoefficient(std::move(c.b));
  return c;
}

LweCiphertext ExtractLwe(const RlweCiphertext& c, size_t index,
                         const RingContext& ring) {
  CheckRow(c, ring);
  const size_t n = ring.n();
  if (index >= n) {
    throw Error(ErrorCode::kOutOfRange,
                "extraction index " + std::to_string(index) +
                    " >= N = " + std::to_string(n));
  }
  if (c.domain() != Domain::kCoefficient) {
    throw Error(ErrorCode::kIncompatibleParams,
                "extraction expects coefficient domain");
  }
  LweCiphertext out;
  out.modulus = ring.modulus();
  out.a.resize(n);
  for (size_t j = 0; j < n; ++j) {
    out.a[j] = j <= index ? c.a.coeffs[index - j]
                          : ring.mod().Neg(c.a.coeffs[n + index - j]);
  }
  out.b = c.b.coeffs[index];
  return out;
}

// ---- RGSW -------------------------------------------------------------------

RgswCiphertext RgswEncrypt(const Polynomial& m, const RlweSecretKey& key,
                           uint64_t base, const RingContext& ring,
                           NoiseSampler& sampler) {
  const size_t digits = DigitCount(base, ring.modulus());
  const Polynomial m_coeff = ring.ToCoefficient(m);
  const Polynomial m_ntt = ring.ToNtt(m_coeff);
  const Polynomial zero(ring.n());
  RgswCiphertext g;
  g.c0.base = base;
  g.c1.base = base;
  uint64_t power = 1;
  for (size_t j = 0; j < digits; ++j) {
    Polynomial scaled = ring.ScalarMul(m_ntt, power);
    // c0 row: adding B^j m to the mask makes b - a z carry -z m B^j.
    RlweCiphertext r0 = EncryptNtt(zero, key, ring, sampler);
    ring.AddInPlace(r0.a, scaled);
    RlweCiphertext r1 = EncryptNtt(zero, key, ring, sampler);
    ring.AddInPlace(r1.b, scaled);
    g.c0.rows.push_back(std::move(r0));
    g.c1.rows.push_back(std::move(r1));
    power = ring.mod().Mul(power, base % ring.modulus());
  }
  return g;
}

RgswCiphertext RgswEncryptConstant(uint64_t value, const RlweSecretKey& key,
                                   uint64_t base, const RingContext& ring,
                                   NoiseSampler& sampler) {
  Polynomial m(ring.n());
  m.coeffs[0] = value % ring.modulus();
  return RgswEncrypt(m, key, base, ring, sampler);
}

void DecomposePolynomial(std::span<const uint64_t> poly, uint64_t base,
                         size_t digits, DigitStyle style,
                         const BarrettContext& mod, std::span<uint64_t> out) {
  const size_t n = poly.size();
  const uint64_t q = mod.modulus();
  if (style == DigitStyle::kUnsigned) {
    if (IsPowerOfTwo(base)) {
      const int shift = Log2Exact(base);
      const uint64_t mask = base - 1;
      for (size_t j = 0; j < digits; ++j) {
        uint64_t* dst = out.data() + j * n;
        const int s = static_cast<int>(j) * shift;
        for (size_t i = 0; i < n; ++i) {
          dst[i] = s < 64 ? (poly[i] >> s) & mask : 0;
        }
      }
    } else {
      for (size_t i = 0; i < n; ++i) {
        uint64_t v = poly[i];
        for (size_t j = 0; j < digits; ++j) {
          out[j * n + i] = v % base;
          v /= base;
        }
      }
    }
    return;
  }
  if (IsPowerOfTwo(base)) {
    const int shift = Log2Exact(base);
    const int64_t mask = static_cast<int64_t>(base - 1);
    const int64_t half = static_cast<int64_t>(base / 2);
    thread_local std::vector<int64_t> centered;
    centered.resize(n);
    int64_t* __restrict v = centered.data();
    const uint64_t half_q = q / 2;
    for (size_t i = 0; i < n; ++i) {
      const uint64_t x = poly[i];
      v[i] = x > half_q ? static_cast<int64_t>(x) - static_cast<int64_t>(q)
                        : static_cast<int64_t>(x);
    }
    for (size_t j = 0; j < digits; ++j) {
      uint64_t* __restrict dst = out.data() + j * n;
      const bool last = j + 1 == digits;
      for (size_t i = 0; i < n; ++i) {
        const int64_t d = last ? v[i] : ((v[i] + half) & mask) - half;
        v[i] = (v[i] - d) >> shift;
        dst[i] = static_cast<uint64_t>(d) + (d < 0 ? q : 0);
      }
    }
    return;
  }
  const int64_t b = static_cast<int64_t>(base);
  const int64_t half = b / 2;
  for (size_t i = 0; i < n; ++i) {
    int64_t v = mod.Centered(poly[i]);
    for (size_t j = 0; j < digits; ++j) {
      int64_t d;
      if (j + 1 == digits) {
        d = v;
      } else {
        d = v % b;
        if (d < 0) d += b;
        if (d >= half) d -= b;
        v = (v - d) / b;
      }
      out[j * n + i] = d < 0 ? q - static_cast<uint64_t>(-d)
                             : static_cast<uint64_t>(d);
    }
  }
}

RlweCiphertext ExternalProduct(const RlweCiphertext& c,
                               const RgswCiphertext& g,
                               const RingContext& ring, DigitStyle style) {
  CheckRow(c, ring);
  const size_t digits = g.c1.rows.size();
  if (digits == 0 || g.c0.rows.size() != digits ||
      g.c0.base != g.c1.base ||
      digits != DigitCount(g.c1.base, ring.modulus()) ||
      g.c1.rows[0].a.size() != ring.n()) {
    throw Error(ErrorCode::kIncompatibleParams,
                "RGSW ciphertext does not match the ring");
  }
  internal::CountExternalProduct();
  RlweCiphertext converted;
  const RlweCiphertext* in = &c;
  if (c.domain() != Domain::kCoefficient) {
    converted = RlweToCoefficient(c, ring);
    in = &converted;
  }
  const size_t n = ring.n();
  scratch_digits.resize(2 * digits * n);
  std::span<uint64_t> all(scratch_digits.data(), 2 * digits * n);
  DecomposePolynomial(in->a.coeffs, g.c0.base, digits, style, ring.mod(),
                      all.subspan(0, digits * n));
  DecomposePolynomial(in->b.coeffs, g.c1.base, digits, style, ring.mod(),
                      all.subspan(digits * n, digits * n));
  for (size_t j = 0; j < 2 * digits; ++j) {
    ring.ForwardInPlace(all.subspan(j * n, n));
  }
  internal::CountForwardNtts(2 * digits);
  thread_local std::vector<const RlweCiphertext*> rows;
  rows.clear();
  for (const auto& r : g.c0.rows) rows.push_back(&r);
  for (const auto& r : g.c1.rows) rows.push_back(&r);
  RlweCiphertext out;
  GadgetInnerProduct(all.data(), rows, ring, out);
  return RlweToCoefficient(std::move(out), ring);
}

RlweCiphertext Cmux(const RgswCiphertext& g, const RlweCiphertext& c0,
                    const RlweCiphertext& c1, const RingContext& ring,
                    DigitStyle style) {
  RlweCiphertext diff =
      RlweSub(RlweToCoefficient(c1, ring), RlweToCoefficient(c0, ring), ring);
  RlweCiphertext out = ExternalProduct(diff, g, ring, style);
  RlweAddInPlace(out, RlweToCoefficient(c0, ring), ring);
  return out;
}

RlweCiphertext BlindRotateStep(const RgswCiphertext& g,
                               const RlweCiphertext& c, uint64_t j,
                               const RingContext& ring, DigitStyle style) {
  RlweCiphertext base = RlweToCoefficient(c, ring);
  RlweCiphertext rotated =
      RlweMultiplyMonomial(base, -static_cast<int64_t>(j), ring);
  return Cmux(g, base, rotated, ring, style);
}

// ---- Key switching ----------------------------------------------------------

RlweKeySwitchKey GenerateRlweKeySwitchKey(const Polynomial& from_z,
                                          const RlweSecretKey& to,
                                          uint64_t base,
                                          const RingContext& ring,
                                          NoiseSampler& sampler) {
  const size_t digits = DigitCount(base, ring.modulus());
  const Polynomial z1 = ring.ToCoefficient(from_z);
  RlweKeySwitchKey ksk;
  ksk.base = base;
  uint64_t power = 1;
  for (size_t j = 0; j < digits; ++j) {
    ksk.rows.push_back(
        EncryptNtt(ring.ScalarMul(z1, power), to, ring, sampler));
    power = ring.mod().Mul(power, base % ring.modulus());
  }
  return ksk;
}

RlweCiphertext RlweKeySwitch(const RlweCiphertext& c,
                             const RlweKeySwitchKey& ksk,
                             const RingContext& ring, DigitStyle style) {
  CheckRow(c, ring);
  const size_t digits = ksk.rows.size();
  if (digits == 0 || digits != DigitCount(ksk.base, ring.modulus())) {
    throw Error(ErrorCode::kIncompatibleParams,
                "key-switch key base does not match the ring");
  }
  internal::CountRlweKeySwitch();
  RlweCiphertext converted;
  const RlweCiphertext* in_ptr = &c;
  if (c.domain() != Domain::kCoefficient) {
    converted = RlweToCoefficient(c, ring);
    in_ptr = &converted;
  }
  const RlweCiphertext& in = *in_ptr;
  const size_t n = ring.n();
  scratch_digits.resize(digits * n);
  std::span<uint64_t> da(scratch_digits.data(), digits * n);
  DecomposePolynomial(in.a.coeffs, ksk.base, digits, style, ring.mod(), da);
  for (size_t j = 0; j < digits; ++j) {
    ring.ForwardInPlace(da.subspan(j * n, n));
  }
  internal::CountForwardNtts(digits);
  thread_local std::vector<const RlweCiphertext*> rows;
  rows.clear();
  for (const auto& r : ksk.rows) rows.push_back(&r);
  RlweCiphertext sum;
  GadgetInnerProduct(da.data(), rows, ring, sum);
  sum = RlweToCoefficient(std::move(sum), ring);
  RlweCiphertext out;
  out.a = ring.Negate(sum.a);
  out.b = ring.Sub(in.b, sum.b);
  return out;
}

LweKeySwitchKey GenerateLweKeySwitchKey(const LweSecretKey& from,
                                        const LweSecretKey& to, uint64_t base,
                                        uint64_t modulus,
                                        NoiseSampler& sampler) {
  BarrettContext mod(modulus);
  LweKeySwitchKey ksk;
  ksk.from_dim = from.s.size();
  ksk.to_dim = to.s.size();
  ksk.base = base;
  ksk.digits = DigitCount(base, modulus);
  ksk.modulus = modulus;
  ksk.data.resize(ksk.from_dim * ksk.digits * (ksk.to_dim + 1));
  std::vector<uint64_t> to_key(ksk.to_dim);
  for (size_t k = 0; k < ksk.to_dim; ++k) to_key[k] = mod.FromSigned(to.s[k]);
  for (size_t i = 0; i < ksk.from_dim; ++i) {
    uint64_t value = mod.FromSigned(from.s[i]);
    for (size_t j = 0; j < ksk.digits; ++j) {
      uint64_t* e = ksk.data.data() + (i * ksk.digits + j) * (ksk.to_dim + 1);
      uint64_t dot = 0;
      for (size_t k = 0; k < ksk.to_dim; ++k) {
        e[k] = sampler.Uniform(modulus);
        dot = mod.Add(dot, mod.Mul(e[k], to_key[k]));
      }
      e[ksk.to_dim] =
          mod.Add(mod.Add(dot, mod.FromSigned(sampler.Gaussian())), value);
      value = mod.Mul(value, base % modulus);
    }
  }
  return ksk;
}

LweCiphertext LweKeySwitch(const LweCiphertext& c,
                           const LweKeySwitchKey& ksk) {
  if (c.dim() != ksk.from_dim || c.modulus != ksk.modulus) {
    throw Error(ErrorCode::kIncompatibleParams,
                "LWE key switch: input dimension/modulus mismatch");
  }
  internal::CountLweKeySwitch();
  BarrettContext mod(ksk.modulus);
  const size_t width = ksk.to_dim + 1;
  // Each term is below modulus * base; flush before a 64-bit sum can wrap.
  const uint64_t term_bound = ksk.modulus * (ksk.base - 1);
  const uint64_t flush_every =
      std::max<uint64_t>(1, (~uint64_t{0} - ksk.modulus) / term_bound);
  std::vector<uint64_t> acc(width, 0);
  uint64_t pending = 0;
  std::vector<uint64_t> digits(ksk.digits);
  for (size_t i = 0; i < ksk.from_dim; ++i) {
    GadgetDecomposeInto(c.a[i], ksk.base, digits);
    for (size_t j = 0; j < ksk.digits; ++j) {
      const uint64_t d = digits[j];
      if (d == 0) continue;
      const uint64_t* e = ksk.entry(i, j);
      for (size_t k = 0; k < width; ++k) acc[k] += d * e[k];
      if (++pending == flush_every) {
        for (auto& v : acc) v %= ksk.modulus;
        pending = 0;
      }
    }
  }
  LweCiphertext out;
  out.modulus = ksk.modulus;
  out.a.resize(ksk.to_dim);
  for (size_t k = 0; k < ksk.to_dim; ++k) {
    out.a[k] = mod.Neg(acc[k] % ksk.modulus);
  }
  out.b = mod.Sub(c.b, acc[ksk.to_dim] % ksk.modulus);
  return out;
}

LweCiphertext LweModSwitch(const LweCiphertext& c, uint64_t target) {
  LweCiphertext out;
  out.modulus = target;
  out.a.resize(c.dim());
  for (size_t i = 0; i < c.dim(); ++i) {
    out.a[i] = RoundDiv(static_cast<uint128>(c.a[i]) * target, c.modulus) %
               target;
  }
  out.b = RoundDiv(static_cast<uint128>(c.b) * target, c.modulus) % target;
  return out;
}

}  // namespace lutpsi
