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

// Unbalanced private set intersection from homomorphic table lookups.
//
// The Receiver hashes its b-bit elements into 2^k bins with permutation
// hashing, so each bin stores only the high b - k bits of its element. For
// every digit j of the gadget and every stored bit t it sends one RLWE whose
// coefficient i is bit t of bin i times B_G^j. The Sender expands these into
// per-bin RLWEs, rebuilds RGSW ciphertexts of the bits with one external
// product against RGSW(-z) per row, and evaluates a per-bin membership table
// built from its own set. The Receiver decrypts one LWE per bin.

#ifndef LUTPSI_PSI_H_
#define LUTPSI_PSI_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lutpsi/ciphertext.h"
#include "lutpsi/counters.h"
#include "lutpsi/expansion.h"
#include "lutpsi/params.h"

namespace lutpsi {

struct PsiConfig {
  ParameterSet params;
  size_t b = 16;  // element bits
  size_t k = 8;   // bin-index bits

  size_t stored_bits() const { return b - k; }
  uint64_t bins() const { return uint64_t{1} << k; }
};

// Throws kInvalidDimension unless 0 < k < b <= 63 and b - k <= 24, and
// kIncompatibleParams unless the gadget base equals the RLWE key-switch base.
void ValidatePsiConfig(const PsiConfig& config);

// pos(x) = H(x_H) XOR x_L with x_L the low k bits of x and x_H the rest.
class PermutationHash {
 public:
  PermutationHash(size_t b, size_t k, uint64_t key);

  size_t b() const { return b_; }
  size_t k() const { return k_; }
  uint64_t key() const { return key_; }

  // k-bit digest of the high part.
  uint64_t H(uint64_t high) const;

  struct Slot {
    uint64_t position;
    uint64_t stored;
  };
  // Throws kOutOfRange if x >= 2^b.
  Slot Locate(uint64_t x) const;
  // Inverse of Locate.
  uint64_t Recover(uint64_t position, uint64_t stored) const;

#ifdef LUTPSI_TESTING
  static PermutationHash WithFunctionForTesting(
      size_t b, size_t k, std::function<uint64_t(uint64_t)> h) {
    PermutationHash hash(b, k, 0);
    hash.override_ = std::move(h);
    return hash;
  }
#endif

 private:
  size_t b_;
  size_t k_;
  uint64_t key_;
  std::function<uint64_t(uint64_t)> override_;
};

// The all-ones stored value, reserved to mark empty Receiver bins.
uint64_t DummyStoredValue(size_t b, size_t k);

// Hash key used for attempt `attempt` under a session seed.
uint64_t DeriveHashKey(uint64_t seed, int attempt);

class HashTable {
 public:
  explicit HashTable(PermutationHash hash);

  const PermutationHash& hash() const { return hash_; }
  size_t size() const { return bins_.size(); }

  // Returns the bin. Throws kCollision if the bin holds a different value,
  // kReservedElement if x maps to the dummy stored value.
  uint64_t Insert(uint64_t x);
  // Like Insert but returns false instead of throwing kCollision.
  bool TryInsert(uint64_t x);

  const std::optional<uint64_t>& bin(size_t i) const { return bins_[i]; }
  // Stored value, or the dummy value for empty bins.
  uint64_t StoredOrDummy(size_t i) const;
  size_t occupied() const { return occupied_; }

 private:
  PermutationHash hash_;
  std::vector<std::optional<uint64_t>> bins_;
  size_t occupied_ = 0;
};

// Receiver-side hashing. Up to `max_rekeys` fresh keys are tried for a
// single collision-free table; after that, if layers are allowed, the set is
// spread over several tables under the first key, each holding at most one
// element per bin and each queried separately. Elements whose stored value
// is the dummy value throw kReservedElement.
struct ReceiverHashing {
  uint64_t hash_key = 0;
  int rekeys = 0;
  std::vector<HashTable> layers;
};
ReceiverHashing HashReceiverSet(std::span<const uint64_t> set,
                                const PsiConfig& config, uint64_t seed,
                                int max_rekeys = 8, bool allow_layers = true);

// Sender-side tables: bins[i] lists, sorted and unique, the stored values
// y_H of the set elements hashed to bin i. The dummy value is never listed.
struct SenderTables {
  size_t stored_bits = 0;
  std::vector<std::vector<uint64_t>> bins;
};
SenderTables BuildSenderTables(std::span<const uint64_t> set,
                               const PermutationHash& hash);

struct SenderKeyMaterial {
  SubstitutionKeySet substitution;
  RgswCiphertext neg_z;  // RGSW(-z) under base B_G

  bool operator==(const SenderKeyMaterial&) const = default;
};
SenderKeyMaterial GenerateSenderKeyMaterial(const RlweSecretKey& key,
                                            const PsiConfig& config,
                                            const RingContext& ring,
                                            NoiseSampler& sampler);

// One query covers bins [index * width, (index + 1) * width).
struct PsiQuery {
  uint64_t index = 0;
  uint64_t width = 0;   // power of two, at most N
  uint64_t digits = 0;  // dG
  uint64_t bits = 0;    // b - k
  std::vector<RlweCiphertext> grid;  // grid[j * bits + t], NTT domain

  const RlweCiphertext& at(size_t j, size_t t) const {
    return grid[j * bits + t];
  }
  bool operator==(const PsiQuery&) const = default;
};

struct PsiReply {
  uint64_t index = 0;
  std::vector<LweCiphertext> results;  // one per bin, modulus Q, dim N

  bool operator==(const PsiReply&) const = default;
};

uint64_t QueriesPerTable(const PsiConfig& config);
uint64_t QueryWidth(const PsiConfig& config);

PsiQuery ReceiverPack(const HashTable& table, uint64_t index,
                      const PsiConfig& config, const RlweSecretKey& key,
                      const RingContext& ring, NoiseSampler& sampler);

// Per-bin RGSW encryptions of the stored bits, bit 0 first.
std::vector<std::vector<RgswCiphertext>> SenderUnpack(
    const PsiQuery& query, const SenderKeyMaterial& km,
    const PsiConfig& config, const RingContext& ring);

// Sender worker threads; defaults to the hardware concurrency. 0 restores
// the default.
void SetSenderWorkers(size_t workers);
size_t SenderWorkers();

// Accumulated seconds per part of SenderAnswer. With several workers the
// figures are summed over threads.
struct SenderPhaseTimes {
  double substitution = 0;      // expansion: substitutions and key switches
  double external_product = 0;  // RGSW rebuild and LUT evaluation
  double rgsw_transfer = 0;     // moving rebuilt rows into RGSW form
  double post_process = 0;      // table building and result extraction
};

// Unpack plus one table lookup per bin.
PsiReply SenderAnswer(const PsiQuery& query, const SenderKeyMaterial& km,
                      const SenderTables& tables, const PsiConfig& config,
                      const RingContext& ring,
                      SenderPhaseTimes* phases = nullptr);

struct DecodedReply {
  std::vector<uint64_t> matches;
  // Replies that decrypted to something other than 0 or 1.
  uint64_t non_binary = 0;
};
DecodedReply ReceiverDecode(const PsiReply& reply, const HashTable& table,
                            const PsiConfig& config, const RlweSecretKey& key,
                            const RingContext& ring);

struct PsiStats {
  int rekeys = 0;
  size_t layers = 0;
  size_t queries = 0;
  uint64_t non_binary_replies = 0;
  OpCounts sender_ops;
};

// Receiver state for one protocol run. All randomness derives from `seed`;
// queries must be built in order for runs to be reproducible.
class PsiReceiver {
 public:
  PsiReceiver(const PsiConfig& config, std::span<const uint64_t> set,
              uint64_t seed);

  const PsiConfig& config() const { return config_; }
  const RingContext& ring() const { return *ring_; }
  const RlweSecretKey& key() const { return key_; }
  const SenderKeyMaterial& key_material() const { return km_; }
  const ReceiverHashing& hashing() const { return hashing_; }
  uint64_t hash_key() const { return hashing_.hash_key; }
  size_t query_count() const;

  PsiQuery MakeQuery(size_t n);
  void Consume(size_t n, const PsiReply& reply);

  // Sorted intersection of everything consumed so far.
  std::vector<uint64_t> Result() const;
  uint64_t non_binary_replies() const { return non_binary_; }

 private:
  PsiConfig config_;
  std::shared_ptr<const RingContext> ring_;
  NoiseSampler sampler_;
  RlweSecretKey key_;
  SenderKeyMaterial km_;
  ReceiverHashing hashing_;
  std::vector<uint64_t> matches_;
  uint64_t non_binary_ = 0;
};

class PsiSender {
 public:
  PsiSender(const PsiConfig& config, std::span<const uint64_t> set,
            uint64_t hash_key);

  PsiReply Answer(const PsiQuery& query, const SenderKeyMaterial& km) const;

 private:
  PsiConfig config_;
  std::shared_ptr<const RingContext> ring_;
  SenderTables tables_;
};

// In-process protocol run; returns the sorted intersection.
std::vector<uint64_t> PsiRun(std::span<const uint64_t> receiver_set,
                             std::span<const uint64_t> sender_set,
                             const PsiConfig& config, uint64_t seed,
                             PsiStats* stats = nullptr);

// Plaintext intersection, sorted and deduplicated.
std::vector<uint64_t> PlainIntersection(std::span<const uint64_t> a,
                                        std::span<const uint64_t> b);

struct PsiCost {
  uint64_t query_rlwe_count = 0;
  uint64_t query_bytes = 0;
  uint64_t cmux_per_bin = 0;
  uint64_t total_cmux = 0;
  uint64_t reduction_factor = 0;
};
// Coefficients are counted as whole 8-byte words.
PsiCost CostModel(uint64_t b, uint64_t k, uint64_t ring_dim, uint64_t digits,
                  uint64_t modulus_bits);

}  // namespace lutpsi

#endif  // LUTPSI_PSI_H_
