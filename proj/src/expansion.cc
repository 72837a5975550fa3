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

#include "lutpsi/expansion.h"

#include <exception>
#include <string>
#include <thread>
#include <utility>

#include "lutpsi/counters.h"
#include "lutpsi/error.h"

namespace lutpsi {

std::vector<uint64_t> ExpansionExponents(uint64_t ring_dim) {
  std::vector<uint64_t> out;
  for (uint64_t step = ring_dim; step > 1; step >>= 1) {
    out.push_back(step + 1);
  }
  return out;
}

SubstitutionKeySet GenerateSubstitutionKeys(const RlweSecretKey& key,
                                            uint64_t base,
                                            const RingContext& ring,
                                            NoiseSampler& sampler) {
  SubstitutionKeySet set;
  set.base = base;
  for (uint64_t k : ExpansionExponents(ring.n())) {
    Polynomial from = ring.Substitute(key.z, k);
    set.keys.emplace(k,
                     GenerateRlweKeySwitchKey(from, key, base, ring, sampler));
  }
  return set;
}

RlweCiphertext RlweSubstitute(const RlweCiphertext& c, uint64_t k,
                              const SubstitutionKeySet& keys,
                              const RingContext& ring) {
  auto it = keys.keys.find(k);
  if (it == keys.keys.end()) {
    throw Error(ErrorCode::kKeyNotFound,
                "no substitution key for k = " + std::to_string(k));
  }
  internal::CountSubstitution();
  RlweCiphertext coeff = RlweToCoefficient(c, ring);
  RlweCiphertext sub;
  sub.a = ring.Substitute(coeff.a, k);
  sub.b = ring.Substitute(coeff.b, k);
  return RlweKeySwitch(sub, it->second, ring);
}

namespace {

void CheckWidth(size_t width, const RingContext& ring) {
  if (width == 0 || width > ring.n() || !IsPowerOfTwo(width)) {
    throw Error(ErrorCode::kInvalidDimension,
                "expansion width " + std::to_string(width));
  }
}

// Splits every ciphertext of a node at step `step` into its even and odd
// children. The node holds the coefficients congruent to its index mod
// `step`, moved to multiples of `step`.
std::pair<std::vector<RlweCiphertext>, std::vector<RlweCiphertext>> Split(
    const std::vector<RlweCiphertext>& node, size_t step,
    const SubstitutionKeySet& keys, const RingContext& ring) {
  const uint64_t k = ring.n() / step + 1;
  std::vector<RlweCiphertext> even, odd;
  even.reserve(node.size());
  odd.reserve(node.size());
  for (const RlweCiphertext& c : node) {
    RlweCiphertext sub = RlweSubstitute(c, k, keys, ring);
    even.push_back(RlweAdd(c, sub, ring));
    odd.push_back(RlweMultiplyMonomial(RlweSub(c, sub, ring),
                                       -static_cast<int64_t>(step), ring));
  }
  return {std::move(even), std::move(odd)};
}

void Descend(std::vector<RlweCiphertext> node, size_t idx, size_t step,
             size_t width, const SubstitutionKeySet& keys,
             const RingContext& ring, const ExpansionVisitor& visit) {
  if (step == width) {
    visit(idx, node);
    return;
  }
  auto [even, odd] = Split(node, step, keys, ring);
  node.clear();
  Descend(std::move(even), idx, 2 * step, width, keys, ring, visit);
  Descend(std::move(odd), idx + step, 2 * step, width, keys, ring, visit);
}

}  // namespace

std::vector<RlweCiphertext> RlweExpand(const RlweCiphertext& c,
                                       const SubstitutionKeySet& keys,
                                       const RingContext& ring,
                                       size_t width) {
  CheckWidth(width, ring);
  std::vector<RlweCiphertext> out(width);
  RlweExpandEach({c}, keys, ring, width,
                 [&out](size_t i, std::vector<RlweCiphertext>& v) {
                   out[i] = std::move(v[0]);
                 });
  return out;
}

void RlweExpandEach(const std::vector<RlweCiphertext>& cs,
                    const SubstitutionKeySet& keys, const RingContext& ring,
                    size_t width, const ExpansionVisitor& visit,
                    size_t threads) {
  CheckWidth(width, ring);
  std::vector<RlweCiphertext> root;
  root.reserve(cs.size());
  for (const RlweCiphertext& c : cs) root.push_back(RlweToCoefficient(c, ring));
  if (threads <= 1 || width == 1) {
    Descend(std::move(root), 0, 1, width, keys, ring, visit);
    return;
  }
  // Breadth first until there is a subtree per worker.
  std::vector<std::vector<RlweCiphertext>> level;
  level.push_back(std::move(root));
  size_t step = 1;
  while (level.size() < threads && step < width) {
    std::vector<std::vector<RlweCiphertext>> next(2 * step);
    for (size_t idx = 0; idx < step; ++idx) {
      auto [even, odd] = Split(level[idx], step, keys, ring);
      next[idx] = std::move(even);
      next[idx + step] = std::move(odd);
    }
    level = std::move(next);
    step *= 2;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  for (size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (size_t idx = w; idx < level.size(); idx += threads) {
          Descend(std::move(level[idx]), idx, step, width, keys, ring, visit);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lutpsi
