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

#ifndef LUTPSI_PARAMS_H_
#define LUTPSI_PARAMS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lutpsi {

inline constexpr int kMaxRingModulusBits = 54;

// All scheme constants for one configuration. Immutable once built.
struct ParameterSet {
  std::string name;
  uint64_t lwe_dim = 0;            // n
  uint64_t lwe_modulus = 0;        // q
  uint64_t ring_dim = 0;           // N
  uint64_t ring_modulus = 0;       // Q
  uint64_t plaintext_modulus = 4;  // t
  uint64_t lwe_ks_base = 0;        // B_ks
  uint64_t gadget_base = 0;        // B_G
  uint64_t acc_base = 0;           // B_r
  double sigma = 3.19;
  uint64_t rlwe_ks_base = 0;

  size_t gadget_digits() const;
  size_t lwe_ks_digits() const;
  size_t acc_digits() const;
  size_t rlwe_ks_digits() const;
  int log_ring_dim() const;
  int ring_modulus_bits() const;

  bool operator==(const ParameterSet&) const = default;
};

// Smallest prime Q >= 2^(bits-1) with Q = 1 mod 2*ring_dim.
uint64_t FindNttPrime(int bits, uint64_t ring_dim);

// One of MEDIUM, STD128_AP, STD192, STD256, STD192Q, STD256Q, PSI2048.
// Throws kNotFound otherwise.
ParameterSet BuiltinParams(std::string_view name);
const std::vector<std::string>& BuiltinParamNames();

// PSI-style ring (54-bit Q, B_G = B_rlwe_ks = 2^9) of the given dimension.
// PsiParams(2048) equals BuiltinParams("PSI2048") apart from the name.
ParameterSet PsiParams(uint64_t ring_dim);

// Throws Error with a code specific to the first violated invariant.
void Validate(const ParameterSet& p);

// key=value lines, one field per line.
std::string FormatParams(const ParameterSet& p);

}  // namespace lutpsi

#endif  // LUTPSI_PARAMS_H_
