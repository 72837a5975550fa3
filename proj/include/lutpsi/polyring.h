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

// Polynomials in Z_Q[X]/(X^N + 1).
//
// The forward transform is the Cooley-Tukey negacyclic NTT producing
// bit-reversed output; the inverse is the Gentleman-Sande transform taking
// bit-reversed input back to natural order, followed by scaling with N^-1.
// Values in the NTT domain are therefore always bit-reversed, and values in
// the coefficient domain always natural; Polynomial stores only the domain.

#ifndef LUTPSI_POLYRING_H_
#define LUTPSI_POLYRING_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lutpsi/modring.h"

namespace lutpsi {

enum class Domain : uint8_t { kCoefficient = 0, kNtt = 1 };

struct Polynomial {
  std::vector<uint64_t> coeffs;
  Domain domain = Domain::kCoefficient;

  Polynomial() = default;
  explicit Polynomial(size_t n, Domain d = Domain::kCoefficient)
      : coeffs(n, 0), domain(d) {}
  Polynomial(std::vector<uint64_t> c, Domain d)
      : coeffs(std::move(c)), domain(d) {}

  size_t size() const { return coeffs.size(); }
  bool bit_reversed() const { return domain == Domain::kNtt; }

  bool operator==(const Polynomial&) const = default;
};

// Reverses the low `bits` bits of x.
uint64_t BitReverse(uint64_t x, int bits);

class RingContext {
 public:
  // Throws kNotPowerOfTwo or kNttUnfriendly.
  RingContext(uint64_t ring_dim, uint64_t modulus);

  // Shared, lazily built context per (N, Q).
  static std::shared_ptr<const RingContext> Get(uint64_t ring_dim,
                                                uint64_t modulus);

  size_t n() const { return n_; }
  int log_n() const { return log_n_; }
  uint64_t modulus() const { return mod_.modulus(); }
  const BarrettContext& mod() const { return mod_; }

  // Smallest primitive 2N-th root of unity mod Q.
  uint64_t psi() const { return psi_; }
  // psi^BitReverse(i) and psi^-BitReverse(i).
  const std::vector<uint64_t>& psi_powers() const { return psi_powers_; }
  const std::vector<uint64_t>& psi_inv_powers() const {
    return psi_inv_powers_;
  }
  uint64_t n_inv() const { return n_inv_; }

  void ForwardInPlace(std::span<uint64_t> a) const;
  void InverseInPlace(std::span<uint64_t> a) const;

  // Require the matching input domain; throw kIncompatibleParams otherwise.
  Polynomial Forward(const Polynomial& a) const;
  Polynomial Inverse(const Polynomial& a) const;

  // Domain conversions that pass through values already in the target.
  Polynomial ToNtt(Polynomial a) const;
  Polynomial ToCoefficient(Polynomial a) const;

  Polynomial Add(const Polynomial& a, const Polynomial& b) const;
  Polynomial Sub(const Polynomial& a, const Polynomial& b) const;
  Polynomial Negate(const Polynomial& a) const;
  Polynomial ScalarMul(const Polynomial& a, uint64_t scalar) const;
  void AddInPlace(Polynomial& a, const Polynomial& b) const;
  void SubInPlace(Polynomial& a, const Polynomial& b) const;

  // Both operands in the NTT domain.
  Polynomial PointwiseMul(const Polynomial& a, const Polynomial& b) const;

  // Negacyclic product of operands in any domain; coefficient-domain result.
  Polynomial NegacyclicMul(const Polynomial& a, const Polynomial& b) const;

  // a(X^k) for odd k; coefficient domain only. Throws kInvalidSubstitution
  // for even k.
  Polynomial Substitute(const Polynomial& a, uint64_t k) const;

  // X^e * a with e taken mod 2N; coefficient domain only.
  Polynomial MultiplyMonomial(const Polynomial& a, int64_t e) const;

  Polynomial FromSigned(std::span<const int64_t> values) const;

 private:
  void CheckShape(const Polynomial& a) const;
  void ForwardSmall(std::span<uint64_t> a) const;
  void InverseSmall(std::span<uint64_t> a) const;

  size_t n_;
  int log_n_;
  BarrettContext mod_;
  uint64_t psi_;
  std::vector<uint64_t> psi_powers_;
  std::vector<uint64_t> psi_powers_shoup_;
  std::vector<uint64_t> psi_inv_powers_;
  std::vector<uint64_t> psi_inv_powers_shoup_;
  // Moduli below 2^30 take a path on 32-bit lanes.
  bool small_ = false;
  std::vector<uint32_t> psi_powers32_;
  std::vector<uint32_t> psi_powers_shoup32_;
  std::vector<uint32_t> psi_inv_powers32_;
  std::vector<uint32_t> psi_inv_powers_shoup32_;
  uint64_t n_inv_;
  uint64_t n_inv_shoup_;
};

}  // namespace lutpsi

#endif  // LUTPSI_POLYRING_H_
