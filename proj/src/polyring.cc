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

#include "lutpsi/polyring.h"

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "lutpsi/error.h"

namespace lutpsi {
namespace {

uint64_t FindPsi(const BarrettContext& mod, uint64_t n) {
  const uint64_t q = mod.modulus();
  const uint64_t order = 2 * n;
  for (uint64_t x = 2; x < q; ++x) {
    uint64_t root = mod.Pow(x, (q - 1) / order);
    if (mod.Pow(root, n) != q - 1) continue;
    // Every primitive 2N-th root is an odd power of this one.
    uint64_t best = root;
    uint64_t step = mod.Mul(root, root);
    uint64_t current = root;
    for (uint64_t k = 1; k < n; ++k) {
      current = mod.Mul(current, step);
      if (current < best) best = current;
    }
    return best;
  }
  throw Error(ErrorCode::kNttUnfriendly, "no primitive 2N-th root");
}

}  // namespace

uint64_t BitReverse(uint64_t x, int bits) {
  uint64_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

RingContext::RingContext(uint64_t ring_dim, uint64_t modulus)
    : n_(ring_dim), log_n_(0), mod_(modulus) {
  if (ring_dim < 2 || !IsPowerOfTwo(ring_dim)) {
    throw Error(ErrorCode::kNotPowerOfTwo,
                "ring dimension " + std::to_string(ring_dim));
  }
  if (modulus % (2 * ring_dim) != 1 || !IsPrime(modulus)) {
    throw Error(ErrorCode::kNttUnfriendly,
                std::to_string(modulus) + " is not a prime = 1 mod 2N");
  }
  log_n_ = Log2Exact(ring_dim);
  psi_ = FindPsi(mod_, n_);
  const uint64_t psi_inv = mod_.Inverse(psi_);
  psi_powers_.resize(n_);
  psi_inv_powers_.resize(n_);
  psi_powers_shoup_.resize(n_);
  psi_inv_powers_shoup_.resize(n_);
  uint64_t power = 1, inv_power = 1;
  for (size_t i = 0; i < n_; ++i) {
    size_t r = BitReverse(i, log_n_);
    psi_powers_[r] = power;
    psi_inv_powers_[r] = inv_power;
    power = mod_.Mul(power, psi_);
    inv_power = mod_.Mul(inv_power, psi_inv);
  }
  for (size_t i = 0; i < n_; ++i) {
    psi_powers_shoup_[i] = ShoupPrecompute(psi_powers_[i], modulus);
    psi_inv_powers_shoup_[i] = ShoupPrecompute(psi_inv_powers_[i], modulus);
  }
  small_ = modulus < (uint64_t{1} << 30);
  if (small_) {
    for (size_t i = 0; i < n_; ++i) {
      psi_powers32_.push_back(static_cast<uint32_t>(psi_powers_[i]));
      psi_powers_shoup32_.push_back(
          static_cast<uint32_t>(psi_powers_shoup_[i] >> 32));
      psi_inv_powers32_.push_back(static_cast<uint32_t>(psi_inv_powers_[i]));
      psi_inv_powers_shoup32_.push_back(
          static_cast<uint32_t>(psi_inv_powers_shoup_[i] >> 32));
    }
  }
  n_inv_ = mod_.Inverse(n_ % modulus);
  n_inv_shoup_ = ShoupPrecompute(n_inv_, modulus);
}

std::shared_ptr<const RingContext> RingContext::Get(uint64_t ring_dim,
                                                    uint64_t modulus) {
  static std::mutex mu;
  static std::map<std::pair<uint64_t, uint64_t>,
                  std::shared_ptr<const RingContext>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{ring_dim, modulus}];
  if (!slot) slot = std::make_shared<const RingContext>(ring_dim, modulus);
  return slot;
}

namespace {

// Shoup product on 32-bit lanes: x < 2^32 and a modulus below 2^30, so every
// intermediate is a 32x32-bit product. Result in [0, 2m).
inline uint32_t MulShoupLazy32(uint32_t x, uint32_t w, uint32_t w_shoup,
                               uint32_t m) {
  const uint32_t q =
      static_cast<uint32_t>((static_cast<uint64_t>(x) * w_shoup) >> 32);
  return x * w - q * m;
}

// One forward stage with span T < 16, looping over groups so that each
// group's butterflies fit in a vector.
template <size_t T>
[[gnu::noinline]] void ForwardGroups(uint32_t* __restrict d, size_t m,
                                const uint32_t* tw, const uint32_t* ts,
                                uint32_t p) {
  const uint32_t two_p = 2 * p;
  for (size_t i = 0; i < m; ++i) {
    uint32_t* g = d + 2 * T * i;
    const uint32_t w = tw[m + i];
    const uint32_t w_shoup = ts[m + i];
    for (size_t j = 0; j < T; ++j) {
      uint32_t u = g[j];
      u = u >= two_p ? u - two_p : u;
      uint32_t v = MulShoupLazy32(g[j + T], w, w_shoup, p);
      g[j] = u + v;
      g[j + T] = u - v + two_p;
    }
  }
}

template <size_t T>
[[gnu::noinline]] void InverseGroups(uint32_t* __restrict d, size_t h,
                                const uint32_t* tw, const uint32_t* ts,
                                uint32_t p) {
  const uint32_t two_p = 2 * p;
  for (size_t i = 0; i < h; ++i) {
    uint32_t* g = d + 2 * T * i;
    const uint32_t w = tw[h + i];
    const uint32_t w_shoup = ts[h + i];
    for (size_t j = 0; j < T; ++j) {
      uint32_t u = g[j];
      uint32_t v = g[j + T];
      uint32_t s = u + v;
      g[j] = s >= two_p ? s - two_p : s;
      g[j + T] = MulShoupLazy32(u - v + two_p, w, w_shoup, p);
    }
  }
}

// Butterflies between x[0, t) and y[0, t) with a single twiddle.
[[gnu::noinline]] void ForwardSpan(uint32_t* __restrict x,
                              uint32_t* __restrict y, size_t t, uint32_t w,
                              uint32_t w_shoup, uint32_t p) {
  const uint32_t two_p = 2 * p;
  for (size_t j = 0; j < t; ++j) {
    uint32_t u = x[j];
    u = u >= two_p ? u - two_p : u;
    uint32_t v = MulShoupLazy32(y[j], w, w_shoup, p);
    x[j] = u + v;
    y[j] = u - v + two_p;
  }
}

[[gnu::noinline]] void InverseSpan(uint32_t* __restrict x,
                              uint32_t* __restrict y, size_t t, uint32_t w,
                              uint32_t w_shoup, uint32_t p) {
  const uint32_t two_p = 2 * p;
  for (size_t j = 0; j < t; ++j) {
    uint32_t u = x[j];
    uint32_t v = y[j];
    uint32_t s = u + v;
    x[j] = s >= two_p ? s - two_p : s;
    y[j] = MulShoupLazy32(u - v + two_p, w, w_shoup, p);
  }
}

}  // namespace

// The small-modulus transforms run on a 32-bit copy of the input. Lazy
// values stay below 4Q < 2^32.
void RingContext::ForwardSmall(std::span<uint64_t> a) const {
  thread_local std::vector<uint32_t> buffer;
  const size_t n = a.size();
  buffer.resize(n);
  uint32_t* __restrict d = buffer.data();
  for (size_t i = 0; i < n; ++i) d[i] = static_cast<uint32_t>(a[i]);
  const uint32_t p = static_cast<uint32_t>(modulus());
  const uint32_t two_p = 2 * p;
  const uint32_t* tw = psi_powers32_.data();
  const uint32_t* ts = psi_powers_shoup32_.data();
  size_t t = n;
  for (size_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    switch (t) {
      case 8: ForwardGroups<8>(d, m, tw, ts, p); continue;
      case 4: ForwardGroups<4>(d, m, tw, ts, p); continue;
      case 2: ForwardGroups<2>(d, m, tw, ts, p); continue;
      case 1: ForwardGroups<1>(d, m, tw, ts, p); continue;
      default: break;
    }
    for (size_t i = 0; i < m; ++i) {
      uint32_t* x = d + 2 * i * t;
      ForwardSpan(x, x + t, t, tw[m + i], ts[m + i], p);
    }
  }
  for (size_t i = 0; i < n; ++i) {
    uint32_t v = d[i];
    v = v >= two_p ? v - two_p : v;
    a[i] = v >= p ? v - p : v;
  }
}

void RingContext::InverseSmall(std::span<uint64_t> a) const {
  thread_local std::vector<uint32_t> buffer;
  const size_t n = a.size();
  buffer.resize(n);
  uint32_t* __restrict d = buffer.data();
  for (size_t i = 0; i < n; ++i) d[i] = static_cast<uint32_t>(a[i]);
  const uint32_t p = static_cast<uint32_t>(modulus());
  const uint32_t* tw = psi_inv_powers32_.data();
  const uint32_t* ts = psi_inv_powers_shoup32_.data();
  size_t t = 1;
  for (size_t m = n; m > 1; m >>= 1, t <<= 1) {
    const size_t h = m >> 1;
    switch (t) {
      case 1: InverseGroups<1>(d, h, tw, ts, p); continue;
      case 2: InverseGroups<2>(d, h, tw, ts, p); continue;
      case 4: InverseGroups<4>(d, h, tw, ts, p); continue;
      case 8: InverseGroups<8>(d, h, tw, ts, p); continue;
      default: break;
    }
    for (size_t i = 0; i < h; ++i) {
      uint32_t* x = d + 2 * i * t;
      InverseSpan(x, x + t, t, tw[h + i], ts[h + i], p);
    }
  }
  const uint32_t n_inv = static_cast<uint32_t>(n_inv_);
  const uint32_t n_inv_shoup = static_cast<uint32_t>(n_inv_shoup_ >> 32);
  for (size_t i = 0; i < n; ++i) {
    uint32_t v = MulShoupLazy32(d[i], n_inv, n_inv_shoup, p);
    a[i] = v >= p ? v - p : v;
  }
}

void RingContext::ForwardInPlace(std::span<uint64_t> a) const {
  if (small_) {
    ForwardSmall(a);
    return;
  }
  const uint64_t p = modulus();
  const uint64_t two_p = 2 * p;
  size_t t = n_;
  for (size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (size_t i = 0; i < m; ++i) {
      const size_t j1 = 2 * i * t;
      const uint64_t w = psi_powers_[m + i];
      const uint64_t w_shoup = psi_powers_shoup_[m + i];
      uint64_t* x = a.data() + j1;
      uint64_t* y = x + t;
      for (size_t j = 0; j < t; ++j) {
        uint64_t u = x[j];
        if (u >= two_p) u -= two_p;
        uint64_t v = MulShoupLazy(y[j], w, w_shoup, p);
        x[j] = u + v;
        y[j] = u - v + two_p;
      }
    }
  }
  for (auto& v : a) {
    if (v >= two_p) v -= two_p;
    if (v >= p) v -= p;
  }
}

void RingContext::InverseInPlace(std::span<uint64_t> a) const {
  if (small_) {
    InverseSmall(a);
    return;
  }
  const uint64_t p = modulus();
  const uint64_t two_p = 2 * p;
  size_t t = 1;
  for (size_t m = n_; m > 1; m >>= 1) {
    const size_t h = m >> 1;
    size_t j1 = 0;
    for (size_t i = 0; i < h; ++i) {
      const uint64_t w = psi_inv_powers_[h + i];
      const uint64_t w_shoup = psi_inv_powers_shoup_[h + i];
      uint64_t* x = a.data() + j1;
      uint64_t* y = x + t;
      for (size_t j = 0; j < t; ++j) {
        uint64_t u = x[j];
        uint64_t v = y[j];
        uint64_t s = u + v;
        x[j] = s >= two_p ? s - two_p : s;
        y[j] = MulShoupLazy(u - v + two_p, w, w_shoup, p);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& v : a) {
    v = MulShoupLazy(v, n_inv_, n_inv_shoup_, p);
    if (v >= p) v -= p;
  }
}

void RingContext::CheckShape(const Polynomial& a) const {
  if (a.size() != n_) {
    throw Error(ErrorCode::kIncompatibleParams,
                "polynomial length " + std::to_string(a.size()) +
                    " does not match ring dimension " + std::to_string(n_));
  }
}

Polynomial RingContext::Forward(const Polynomial& a) const {
  CheckShape(a);
  if (a.domain != Domain::kCoefficient) {
    throw Error(ErrorCode::kIncompatibleParams,
                "forward NTT expects coefficient domain");
  }
  Polynomial out(a.coeffs, Domain::kNtt);
  ForwardInPlace(out.coeffs);
  return out;
}

Polynomial RingContext::Inverse(const Polynomial& a) const {
  CheckShape(a);
  if (a.domain != Domain::kNtt) {
    throw Error(ErrorCode::kIncompatibleParams,
                "inverse NTT expects NTT domain");
  }
  Polynomial out(a.coeffs, Domain::kCoefficient);
  InverseInPlace(out.coeffs);
  return out;
}

Polynomial RingContext::ToNtt(Polynomial a) const {
  CheckShape(a);
  if (a.domain == Domain::kCoefficient) {
    ForwardInPlace(a.coeffs);
    a.domain = Domain::kNtt;
  }
  return a;
}

Polynomial RingContext::ToCoefficient(Polynomial a) const {
  CheckShape(a);
  if (a.domain == Domain::kNtt) {
    InverseInPlace(a.coeffs);
    a.domain = Domain::kCoefficient;
  }
  return a;
}

void RingContext::AddInPlace(Polynomial& a, const Polynomial& b) const {
  CheckShape(a);
  CheckShape(b);
  if (a.domain != b.domain) {
    throw Error(ErrorCode::kIncompatibleParams, "domain mismatch in add");
  }
  for (size_t i = 0; i < n_; ++i) {
    a.coeffs[i] = mod_.Add(a.coeffs[i], b.coeffs[i]);
  }
}

void RingContext::SubInPlace(Polynomial& a, const Polynomial& b) const {
  CheckShape(a);
  CheckShape(b);
  if (a.domain != b.domain) {
    throw Error(ErrorCode::kIncompatibleParams, "domain mismatch in sub");
  }
  for (size_t i = 0; i < n_; ++i) {
    a.coeffs[i] = mod_.Sub(a.coeffs[i], b.coeffs[i]);
  }
}

Polynomial RingContext::Add(const Polynomial& a, const Polynomial& b) const {
  Polynomial out = a;
  AddInPlace(out, b);
  return out;
}

Polynomial RingContext::Sub(const Polynomial& a, const Polynomial& b) const {
  Polynomial out = a;
  SubInPlace(out, b);
  return out;
}

Polynomial RingContext::Negate(const Polynomial& a) const {
  CheckShape(a);
  Polynomial out = a;
  for (auto& v : out.coeffs) v = mod_.Neg(v);
  return out;
}

Polynomial RingContext::ScalarMul(const Polynomial& a, uint64_t scalar) const {
  CheckShape(a);
  Polynomial out = a;
  scalar %= modulus();
  const uint64_t shoup = ShoupPrecompute(scalar, modulus());
  for (auto& v : out.coeffs) {
    v = MulShoupLazy(v, scalar, shoup, modulus());
    if (v >= modulus()) v -= modulus();
  }
  return out;
}

Polynomial RingContext::PointwiseMul(const Polynomial& a,
                                     const Polynomial& b) const {
  CheckShape(a);
  CheckShape(b);
  if (a.domain != Domain::kNtt || b.domain != Domain::kNtt) {
    throw Error(ErrorCode::kIncompatibleParams,
                "pointwise product expects NTT operands");
  }
  Polynomial out(n_, Domain::kNtt);
  for (size_t i = 0; i < n_; ++i) {
    out.coeffs[i] = mod_.Mul(a.coeffs[i], b.coeffs[i]);
  }
  return out;
}

Polynomial RingContext::NegacyclicMul(const Polynomial& a,
                                      const Polynomial& b) const {
  return Inverse(PointwiseMul(ToNtt(a), ToNtt(b)));
}

Polynomial RingContext::Substitute(const Polynomial& a, uint64_t k) const {
  CheckShape(a);
  if (k % 2 == 0) {
    throw Error(ErrorCode::kInvalidSubstitution,
                "substitution exponent " + std::to_string(k) + " is even");
  }
  if (a.domain != Domain::kCoefficient) {
    throw Error(ErrorCode::kIncompatibleParams,
                "substitution expects coefficient domain");
  }
  const uint64_t mask = 2 * n_ - 1;
  k &= mask;
  Polynomial out(n_);
  for (size_t i = 0; i < n_; ++i) {
    uint64_t idx = (static_cast<uint64_t>(i) * k) & mask;
    if (idx < n_) {
      out.coeffs[idx] = a.coeffs[i];
    } else {
      out.coeffs[idx - n_] = mod_.Neg(a.coeffs[i]);
    }
  }
  return out;
}

Polynomial RingContext::MultiplyMonomial(const Polynomial& a, int64_t e) const {
  CheckShape(a);
  if (a.domain != Domain::kCoefficient) {
    throw Error(ErrorCode::kIncompatibleParams,
                "monomial product expects coefficient domain");
  }
  const int64_t two_n = static_cast<int64_t>(2 * n_);
  uint64_t shift = static_cast<uint64_t>(((e % two_n) + two_n) % two_n);
  Polynomial out(n_);
  for (size_t i = 0; i < n_; ++i) {
    uint64_t idx = (i + shift) % (2 * n_);
    if (idx < n_) {
      out.coeffs[idx] = a.coeffs[i];
    } else {
      out.coeffs[idx - n_] = mod_.Neg(a.coeffs[i]);
    }
  }
  return out;
}

Polynomial RingContext::FromSigned(std::span<const int64_t> values) const {
  if (values.size() != n_) {
    throw Error(ErrorCode::kIncompatibleParams, "length mismatch");
  }
  Polynomial out(n_);
  for (size_t i = 0; i < n_; ++i) out.coeffs[i] = mod_.FromSigned(values[i]);
  return out;
}

}  // namespace lutpsi
