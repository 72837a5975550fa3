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

#include "lutpsi/params.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "lutpsi/error.h"
#include "lutpsi/modring.h"

namespace lutpsi {
namespace {

struct Row {
  const char* name;
  uint64_t n, q, ring_dim;
  int q_bits;
  uint64_t ks_base, gadget_base, acc_base;
};

// n, q, N, bits of Q, B_ks, B_G, B_r.
constexpr Row kGateRows[] = {
    {"MEDIUM", 256, 512, 1024, 27, 25, 1 << 9, 23},
    {"STD128_AP", 512, 512, 1024, 27, 25, 1 << 9, 23},
    {"STD192", 512, 512, 2048, 37, 25, 1 << 13, 23},
    {"STD256", 1024, 1024, 2048, 29, 25, 1 << 10, 32},
    {"STD192Q", 1024, 1024, 2048, 35, 25, 1 << 12, 32},
    {"STD256Q", 1024, 1024, 2048, 27, 25, 1 << 7, 32},
};

}  // namespace

size_t ParameterSet::gadget_digits() const {
  return DigitCount(gadget_base, ring_modulus);
}
size_t ParameterSet::lwe_ks_digits() const {
  return DigitCount(lwe_ks_base, ring_modulus);
}
size_t ParameterSet::acc_digits() const {
  return DigitCount(acc_base, lwe_modulus);
}
size_t ParameterSet::rlwe_ks_digits() const {
  return DigitCount(rlwe_ks_base, ring_modulus);
}
int ParameterSet::log_ring_dim() const { return Log2Exact(ring_dim); }
int ParameterSet::ring_modulus_bits() const {
  return std::bit_width(ring_modulus);
}

uint64_t FindNttPrime(int bits, uint64_t ring_dim) {
  if (bits < 2 || bits > kMaxRingModulusBits) {
    throw Error(ErrorCode::kModulusTooLarge,
                "unsupported modulus width " + std::to_string(bits));
  }
  const uint64_t step = 2 * ring_dim;
  const uint64_t lower = uint64_t{1} << (bits - 1);
  const uint64_t upper = uint64_t{1} << bits;
  // First candidate >= lower that is 1 mod step.
  uint64_t candidate = (lower + step - 2) / step * step + 1;
  for (; candidate < upper; candidate += step) {
    if (IsPrime(candidate)) return candidate;
  }
  throw Error(ErrorCode::kNttUnfriendly,
              "no " + std::to_string(bits) + "-bit prime is 1 mod " +
                  std::to_string(step));
}

ParameterSet BuiltinParams(std::string_view name) {
  for (const Row& row : kGateRows) {
    if (name != row.name) continue;
    ParameterSet p;
    p.name = row.name;
    p.lwe_dim = row.n;
    p.lwe_modulus = row.q;
    p.ring_dim = row.ring_dim;
    p.ring_modulus = FindNttPrime(row.q_bits, row.ring_dim);
    p.plaintext_modulus = 4;
    p.lwe_ks_base = row.ks_base;
    p.gadget_base = row.gadget_base;
    p.acc_base = row.acc_base;
    p.sigma = 3.19;
    p.rlwe_ks_base = row.gadget_base;
    return p;
  }
  if (name == "PSI2048") return PsiParams(2048);
  throw Error(ErrorCode::kNotFound,
              "unknown parameter set '" + std::string(name) + "'");
}

const std::vector<std::string>& BuiltinParamNames() {
  static const std::vector<std::string> names = {
      "MEDIUM", "STD128_AP", "STD192", "STD256", "STD192Q", "STD256Q",
      "PSI2048"};
  return names;
}

ParameterSet PsiParams(uint64_t ring_dim) {
  ParameterSet p;
  p.name = "PSI" + std::to_string(ring_dim);
  // The LWE fields are unused by the PSI flow and only need to validate.
  p.lwe_dim = 1024;
  p.lwe_modulus = std::min<uint64_t>(1024, 2 * ring_dim);
  p.ring_dim = ring_dim;
  p.ring_modulus = FindNttPrime(kMaxRingModulusBits, ring_dim);
  p.plaintext_modulus = 4;
  p.lwe_ks_base = 32;
  p.gadget_base = 1 << 9;
  p.acc_base = 32;
  p.sigma = 3.19;
  p.rlwe_ks_base = 1 << 9;
  return p;
}

void Validate(const ParameterSet& p) {
  if (!IsPowerOfTwo(p.ring_dim) || p.ring_dim < 2) {
    throw Error(ErrorCode::kNotPowerOfTwo,
                "ring dimension " + std::to_string(p.ring_dim) +
                    " is not a power of two");
  }
  if (p.ring_modulus >= (uint64_t{1} << kMaxRingModulusBits)) {
    throw Error(ErrorCode::kModulusTooLarge,
                "ring modulus exceeds 54 bits");
  }
  if (p.ring_modulus < 3 || p.ring_modulus % (2 * p.ring_dim) != 1 ||
      !IsPrime(p.ring_modulus)) {
    throw Error(ErrorCode::kNttUnfriendly,
                "ring modulus " + std::to_string(p.ring_modulus) +
                    " is not a prime congruent to 1 mod 2N");
  }
  if (!IsPowerOfTwo(p.lwe_modulus) || p.lwe_modulus > 2 * p.ring_dim) {
    throw Error(ErrorCode::kLweModulusInvalid,
                "LWE modulus must be a power of two no larger than 2N");
  }
  if (p.plaintext_modulus < 4 || p.lwe_modulus % p.plaintext_modulus != 0) {
    throw Error(ErrorCode::kPlaintextModulusInvalid,
                "plaintext modulus must be >= 4 and divide q");
  }
  if (p.gadget_base < 2 || !IsPowerOfTwo(p.gadget_base)) {
    throw Error(ErrorCode::kGadgetBaseInvalid,
                "gadget base must be a power of two");
  }
  if (p.lwe_ks_base < 2 || p.acc_base < 2 || p.rlwe_ks_base < 2 ||
      !IsPowerOfTwo(p.rlwe_ks_base)) {
    throw Error(ErrorCode::kDecompositionBaseInvalid,
                "decomposition bases must be >= 2; RLWE key-switch base a "
                "power of two");
  }
  if (!(p.sigma > 0) || !std::isfinite(p.sigma)) {
    throw Error(ErrorCode::kInvalidSigma, "sigma must be positive");
  }
  if (p.lwe_dim == 0) {
    throw Error(ErrorCode::kInvalidDimension, "LWE dimension must be > 0");
  }
}

std::string FormatParams(const ParameterSet& p) {
  std::ostringstream out;
  out << "name=" << p.name << "\n"
      << "n=" << p.lwe_dim << "\n"
      << "q=" << p.lwe_modulus << "\n"
      << "N=" << p.ring_dim << "\n"
      << "Q=" << p.ring_modulus << "\n"
      << "log2Q=" << p.ring_modulus_bits() << "\n"
      << "t=" << p.plaintext_modulus << "\n"
      << "B_ks=" << p.lwe_ks_base << "\n"
      << "B_G=" << p.gadget_base << "\n"
      << "B_r=" << p.acc_base << "\n"
      << "sigma=" << p.sigma << "\n"
      << "B_rlwe_ks=" << p.rlwe_ks_base << "\n"
      << "dG=" << p.gadget_digits() << "\n"
      << "dks=" << p.lwe_ks_digits() << "\n"
      << "dr=" << p.acc_digits() << "\n";
  return out.str();
}

}  // namespace lutpsi
