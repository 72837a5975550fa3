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

// RLWE substitution m(X) -> m(X^k) followed by a key switch back to z, and
// the recursive expansion of one RLWE into one RLWE per coefficient.

#ifndef LUTPSI_EXPANSION_H_
#define LUTPSI_EXPANSION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lutpsi/ciphertext.h"

namespace lutpsi {

// Key-switch keys from z(X^k) to z for every exponent k in the schedule.
struct SubstitutionKeySet {
  uint64_t base = 0;
  std::map<uint64_t, RlweKeySwitchKey> keys;

  bool operator==(const SubstitutionKeySet&) const = default;
};

// N / 2^s + 1 for s = 0, ..., log2 N - 1.
std::vector<uint64_t> ExpansionExponents(uint64_t ring_dim);

SubstitutionKeySet GenerateSubstitutionKeys(const RlweSecretKey& key,
                                            uint64_t base,
                                            const RingContext& ring,
                                            NoiseSampler& sampler);

// Encrypts m(X^k) under the original key. Throws kKeyNotFound if no key for
// k is present.
RlweCiphertext RlweSubstitute(const RlweCiphertext& c, uint64_t k,
                              const SubstitutionKeySet& keys,
                              const RingContext& ring);

// Splits c, encrypting sum_i m[i] X^i with m[i] = 0 for i >= width, into
// `width` ciphertexts; output i encrypts the constant width * m[i]. width is
// a power of two no larger than N and costs width - 1 substitutions.
std::vector<RlweCiphertext> RlweExpand(const RlweCiphertext& c,
                                       const SubstitutionKeySet& keys,
                                       const RingContext& ring,
                                       size_t width);

inline std::vector<RlweCiphertext> RlweExpand(const RlweCiphertext& c,
                                              const SubstitutionKeySet& keys,
                                              const RingContext& ring) {
  return RlweExpand(c, keys, ring, ring.n());
}

// Expands several ciphertexts at once, depth first, calling
// visit(i, outputs) with output i of every input (in input order) as soon as
// it is ready, so that only one root-to-leaf path is held in memory. With
// threads > 1 the subtrees are processed concurrently and `visit` must be
// safe to call from several threads for distinct i.
using ExpansionVisitor =
    std::function<void(size_t, std::vector<RlweCiphertext>&)>;
void RlweExpandEach(const std::vector<RlweCiphertext>& cs,
                    const SubstitutionKeySet& keys, const RingContext& ring,
                    size_t width, const ExpansionVisitor& visit,
                    size_t threads = 1);

}  // namespace lutpsi

#endif  // LUTPSI_EXPANSION_H_
