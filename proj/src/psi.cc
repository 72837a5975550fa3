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

#include "lutpsi/psi.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iterator>
#include <string>
#include <thread>
#include <utility>

#include "lutpsi/error.h"
#include "lutpsi/homlut.h"

namespace lutpsi {
namespace {

uint64_t Mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t LowMask(size_t bits) {
  return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
}

std::atomic<size_t> g_workers{0};

size_t WorkerCount() { return SenderWorkers(); }

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double>(to - from).count();
}

// Lock-free accumulation of per-thread phase times.
struct PhaseAccumulator {
  std::atomic<double> external_product{0};
  std::atomic<double> rgsw_transfer{0};
  std::atomic<double> post_process{0};

  static void Add(std::atomic<double>& slot, double v) {
    double cur = slot.load(std::memory_order_relaxed);
    while (!slot.compare_exchange_weak(cur, cur + v,
                                       std::memory_order_relaxed)) {
    }
  }
};

}  // namespace

void SetSenderWorkers(size_t workers) { g_workers = workers; }

size_t SenderWorkers() {
  const size_t set = g_workers.load();
  if (set != 0) return set;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void ValidatePsiConfig(const PsiConfig& config) {
  if (config.k == 0 || config.k >= config.b || config.b > 63 ||
      config.stored_bits() > 24) {
    throw Error(ErrorCode::kInvalidDimension,
                "unsupported (b, k) = (" + std::to_string(config.b) + ", " +
                    std::to_string(config.k) + ")");
  }
  Validate(config.params);
  if (config.params.gadget_base != config.params.rlwe_ks_base) {
    throw Error(ErrorCode::kIncompatibleParams,
                "PSI requires the gadget base to equal the RLWE key-switch "
                "base");
  }
}

// ---- Hashing ----------------------------------------------------------------

PermutationHash::PermutationHash(size_t b, size_t k, uint64_t key)
    : b_(b), k_(k), key_(key) {
  if (k == 0 || k >= b || b > 63) {
    throw Error(ErrorCode::kInvalidDimension, "need 0 < k < b <= 63");
  }
}

uint64_t PermutationHash::H(uint64_t high) const {
  if (override_) return override_(high) & LowMask(k_);
  return Mix64(key_ ^ Mix64(high)) & LowMask(k_);
}

PermutationHash::Slot PermutationHash::Locate(uint64_t x) const {
  if (x > LowMask(b_)) {
    throw Error(ErrorCode::kOutOfRange,
                std::to_string(x) + " does not fit in " + std::to_string(b_) +
                    " bits");
  }
  const uint64_t high = x >> k_;
  const uint64_t low = x & LowMask(k_);
  return {H(high) ^ low, high};
}

uint64_t PermutationHash::Recover(uint64_t position, uint64_t stored) const {
  return (stored << k_) | (position ^ H(stored));
}

uint64_t DummyStoredValue(size_t b, size_t k) { return LowMask(b - k); }

uint64_t DeriveHashKey(uint64_t seed, int attempt) {
  return Mix64(seed ^ Mix64(0x6c75747073690000ULL + attempt));
}

HashTable::HashTable(PermutationHash hash)
    : hash_(std::move(hash)), bins_(size_t{1} << hash_.k()) {}

bool HashTable::TryInsert(uint64_t x) {
  const PermutationHash::Slot slot = hash_.Locate(x);
  if (slot.stored == DummyStoredValue(hash_.b(), hash_.k())) {
    throw Error(ErrorCode::kReservedElement,
                std::to_string(x) + " maps to the reserved dummy value");
  }
  std::optional<uint64_t>& bin = bins_[slot.position];
  if (bin.has_value()) return *bin == slot.stored;
  bin = slot.stored;
  ++occupied_;
  return true;
}

uint64_t HashTable::Insert(uint64_t x) {
  if (!TryInsert(x)) {
    throw Error(ErrorCode::kCollision,
                "bin " + std::to_string(hash_.Locate(x).position) +
                    " already holds another element");
  }
  return hash_.Locate(x).position;
}

uint64_t HashTable::StoredOrDummy(size_t i) const {
  return bins_[i].has_value() ? *bins_[i]
                              : DummyStoredValue(hash_.b(), hash_.k());
}

ReceiverHashing HashReceiverSet(std::span<const uint64_t> set,
                                const PsiConfig& config, uint64_t seed,
                                int max_rekeys, bool allow_layers) {
  std::vector<uint64_t> items(set.begin(), set.end());
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());

  ReceiverHashing out;
  if (items.empty()) {
    out.hash_key = DeriveHashKey(seed, 0);
    return out;
  }
  for (int attempt = 0; attempt <= max_rekeys; ++attempt) {
    HashTable table(PermutationHash(config.b, config.k,
                                    DeriveHashKey(seed, attempt)));
    bool ok = true;
    for (uint64_t x : items) {
      if (!table.TryInsert(x)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.hash_key = table.hash().key();
      out.rekeys = attempt;
      out.layers.push_back(std::move(table));
      return out;
    }
  }
  if (!allow_layers) {
    throw Error(ErrorCode::kCollision,
                "receiver set still collides after " +
                    std::to_string(max_rekeys) + " rekeys");
  }
  out.hash_key = DeriveHashKey(seed, 0);
  out.rekeys = max_rekeys;
  const PermutationHash hash(config.b, config.k, out.hash_key);
  for (uint64_t x : items) {
    bool placed = false;
    for (HashTable& layer : out.layers) {
      if (layer.TryInsert(x)) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      out.layers.emplace_back(hash);
      out.layers.back().Insert(x);
    }
  }
  return out;
}

SenderTables BuildSenderTables(std::span<const uint64_t> set,
                               const PermutationHash& hash) {
  SenderTables tables;
  tables.stored_bits = hash.b() - hash.k();
  tables.bins.resize(size_t{1} << hash.k());
  const uint64_t dummy = DummyStoredValue(hash.b(), hash.k());
  for (uint64_t y : set) {
    const PermutationHash::Slot slot = hash.Locate(y);
    if (slot.stored == dummy) continue;
    tables.bins[slot.position].push_back(slot.stored);
  }
  for (auto& bin : tables.bins) {
    std::sort(bin.begin(), bin.end());
    bin.erase(std::unique(bin.begin(), bin.end()), bin.end());
  }
  return tables;
}

// ---- Protocol ---------------------------------------------------------------

SenderKeyMaterial GenerateSenderKeyMaterial(const RlweSecretKey& key,
                                            const PsiConfig& config,
                                            const RingContext& ring,
                                            NoiseSampler& sampler) {
  SenderKeyMaterial km;
  km.substitution = GenerateSubstitutionKeys(
      key, config.params.rlwe_ks_base, ring, sampler);
  km.neg_z = RgswEncrypt(ring.Negate(key.z), key, config.params.gadget_base,
                         ring, sampler);
  return km;
}

uint64_t QueryWidth(const PsiConfig& config) {
  return std::min<uint64_t>(config.bins(), config.params.ring_dim);
}

uint64_t QueriesPerTable(const PsiConfig& config) {
  return config.bins() / QueryWidth(config);
}

PsiQuery ReceiverPack(const HashTable& table, uint64_t index,
                      const PsiConfig& config, const RlweSecretKey& key,
                      const RingContext& ring, NoiseSampler& sampler) {
  if (table.size() != config.bins()) {
    throw Error(ErrorCode::kIncompatibleParams,
                "hash table size does not match 2^k");
  }
  PsiQuery q;
  q.index = index;
  q.width = QueryWidth(config);
  q.digits = config.params.gadget_digits();
  q.bits = config.stored_bits();
  if (index >= QueriesPerTable(config)) {
    throw Error(ErrorCode::kOutOfRange, "query index past the last bin");
  }
  const BarrettContext& mod = ring.mod();
  const uint64_t width_inv = mod.Inverse(q.width % ring.modulus());
  q.grid.reserve(q.digits * q.bits);
  for (size_t j = 0; j < q.digits; ++j) {
    const uint64_t weight =
        mod.Mul(mod.Pow(config.params.gadget_base % ring.modulus(), j),
                width_inv);
    for (size_t t = 0; t < q.bits; ++t) {
      Polynomial m(ring.n());
      for (size_t i = 0; i < q.width; ++i) {
        const uint64_t stored = table.StoredOrDummy(index * q.width + i);
        if ((stored >> t) & 1) m.coeffs[i] = weight;
      }
      q.grid.push_back(RlweEncrypt(m, key, ring, sampler, Domain::kNtt));
    }
  }
  return q;
}

namespace {

void CheckQuery(const PsiQuery& query, const PsiConfig& config) {
  if (query.width != QueryWidth(config) ||
      query.digits != config.params.gadget_digits() ||
      query.bits != config.stored_bits() ||
      query.grid.size() != query.digits * query.bits ||
      query.index >= QueriesPerTable(config)) {
    throw Error(ErrorCode::kIncompatibleParams,
                "query shape does not match the configuration");
  }
}

// visit(bin, rgsw bits) for every bin of the query.
void UnpackEach(
    const PsiQuery& query, const SenderKeyMaterial& km,
    const PsiConfig& config, const RingContext& ring, size_t threads,
    const std::function<void(size_t, std::vector<RgswCiphertext>&)>& visit,
    PhaseAccumulator* acc = nullptr) {
  CheckQuery(query, config);
  const uint64_t base = config.params.gadget_base;
  RlweExpandEach(
      query.grid, km.substitution, ring, query.width,
      [&](size_t bin, std::vector<RlweCiphertext>& rows) {
        std::vector<RgswCiphertext> bits(query.bits);
        for (RgswCiphertext& g : bits) {
          g.c0.base = g.c1.base = base;
          g.c0.rows.resize(query.digits);
          g.c1.rows.resize(query.digits);
        }
        double product = 0, transfer = 0;
        for (size_t j = 0; j < query.digits; ++j) {
          for (size_t t = 0; t < query.bits; ++t) {
            RlweCiphertext& row = rows[j * query.bits + t];
            const Clock::time_point t0 = Clock::now();
            RlweCiphertext c0 = ExternalProduct(row, km.neg_z, ring);
            const Clock::time_point t1 = Clock::now();
            bits[t].c0.rows[j] = RlweToNtt(std::move(c0), ring);
            bits[t].c1.rows[j] = RlweToNtt(std::move(row), ring);
            product += Seconds(t0, t1);
            transfer += Seconds(t1, Clock::now());
          }
        }
        if (acc != nullptr) {
          PhaseAccumulator::Add(acc->external_product, product);
          PhaseAccumulator::Add(acc->rgsw_transfer, transfer);
        }
        visit(bin, bits);
      },
      threads);
}

}  // namespace

std::vector<std::vector<RgswCiphertext>> SenderUnpack(
    const PsiQuery& query, const SenderKeyMaterial& km,
    const PsiConfig& config, const RingContext& ring) {
  std::vector<std::vector<RgswCiphertext>> out(query.width);
  UnpackEach(query, km, config, ring, 1,
             [&out](size_t bin, std::vector<RgswCiphertext>& bits) {
               out[bin] = std::move(bits);
             });
  return out;
}

PsiReply SenderAnswer(const PsiQuery& query, const SenderKeyMaterial& km,
                      const SenderTables& tables, const PsiConfig& config,
                      const RingContext& ring, SenderPhaseTimes* phases) {
  if (tables.bins.size() != config.bins() ||
      tables.stored_bits != config.stored_bits()) {
    throw Error(ErrorCode::kIncompatibleParams,
                "sender tables do not match the configuration");
  }
  PsiReply reply;
  reply.index = query.index;
  reply.results.resize(query.width);
  const uint64_t dummy = DummyStoredValue(config.b, config.k);
  const uint64_t t = config.params.plaintext_modulus;
  const size_t workers = std::min<size_t>(WorkerCount(), query.width);
  PhaseAccumulator acc;
  const Clock::time_point start = Clock::now();
  UnpackEach(
      query, km, config, ring, workers,
      [&](size_t bin, std::vector<RgswCiphertext>& bits) {
        const Clock::time_point t0 = Clock::now();
        const size_t global = query.index * query.width + bin;
        std::vector<uint8_t> table(size_t{1} << config.stored_bits(), 0);
        for (uint64_t y : tables.bins[global]) table[y] = 1;
        table[dummy] = 0;
        const PackedLut lut =
            BuildPackedLut(table, config.stored_bits(), t, ring);
        const Clock::time_point t1 = Clock::now();
        reply.results[bin] = LutEval(lut, bits, ring);
        PhaseAccumulator::Add(acc.post_process, Seconds(t0, t1));
        PhaseAccumulator::Add(acc.external_product, Seconds(t1, Clock::now()));
      },
      &acc);
  if (phases != nullptr) {
    const double busy = Seconds(start, Clock::now()) * workers;
    phases->external_product += acc.external_product;
    phases->rgsw_transfer += acc.rgsw_transfer;
    phases->post_process += acc.post_process;
    phases->substitution += std::max(
        0.0, busy - acc.external_product - acc.rgsw_transfer -
                 acc.post_process);
  }
  return reply;
}

DecodedReply ReceiverDecode(const PsiReply& reply, const HashTable& table,
                            const PsiConfig& config, const RlweSecretKey& key,
                            const RingContext& ring) {
  const uint64_t width = QueryWidth(config);
  if (reply.results.size() != width ||
      reply.index >= QueriesPerTable(config)) {
    throw Error(ErrorCode::kIncompatibleParams,
                "reply shape does not match the configuration");
  }
  const LweSecretKey extracted = ExtractedKey(key);
  DecodedReply out;
  for (size_t i = 0; i < width; ++i) {
    const LweCiphertext& c = reply.results[i];
    if (c.modulus != ring.modulus() || c.dim() != ring.n()) {
      throw Error(ErrorCode::kIncompatibleParams, "reply LWE shape");
    }
    const uint64_t v =
        LweDecrypt(c, extracted, config.params.plaintext_modulus);
    if (v > 1) ++out.non_binary;
    const size_t global = reply.index * width + i;
    if (v == 1 && table.bin(global).has_value()) {
      out.matches.push_back(table.hash().Recover(global, *table.bin(global)));
    }
  }
  return out;
}

PsiReceiver::PsiReceiver(const PsiConfig& config,
                         std::span<const uint64_t> set, uint64_t seed)
    : config_(config),
      ring_(RingContext::Get(config.params.ring_dim,
                             config.params.ring_modulus)),
      sampler_(config.params.sigma,
               DeriveSeed(SeedFromU64(seed), "receiver")) {
  ValidatePsiConfig(config_);
  key_ = GenerateRlweKey(*ring_, sampler_);
  km_ = GenerateSenderKeyMaterial(key_, config_, *ring_, sampler_);
  hashing_ = HashReceiverSet(set, config_, seed);
}

size_t PsiReceiver::query_count() const {
  return hashing_.layers.size() * QueriesPerTable(config_);
}

PsiQuery PsiReceiver::MakeQuery(size_t n) {
  if (n >= query_count()) {
    throw Error(ErrorCode::kOutOfRange, "no query " + std::to_string(n));
  }
  const uint64_t per_table = QueriesPerTable(config_);
  return ReceiverPack(hashing_.layers[n / per_table], n % per_table, config_,
                      key_, *ring_, sampler_);
}

void PsiReceiver::Consume(size_t n, const PsiReply& reply) {
  if (n >= query_count()) {
    throw Error(ErrorCode::kOutOfRange, "no query " + std::to_string(n));
  }
  const uint64_t per_table = QueriesPerTable(config_);
  if (reply.index != n % per_table) {
    throw Error(ErrorCode::kProtocolViolation,
                "reply index does not match the query");
  }
  DecodedReply decoded = ReceiverDecode(reply, hashing_.layers[n / per_table],
                                        config_, key_, *ring_);
  non_binary_ += decoded.non_binary;
  matches_.insert(matches_.end(), decoded.matches.begin(),
                  decoded.matches.end());
}

std::vector<uint64_t> PsiReceiver::Result() const {
  std::vector<uint64_t> out = matches_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PsiSender::PsiSender(const PsiConfig& config, std::span<const uint64_t> set,
                     uint64_t hash_key)
    : config_(config),
      ring_(RingContext::Get(config.params.ring_dim,
                             config.params.ring_modulus)),
      tables_(BuildSenderTables(
          set, PermutationHash(config.b, config.k, hash_key))) {
  ValidatePsiConfig(config_);
}

PsiReply PsiSender::Answer(const PsiQuery& query,
                           const SenderKeyMaterial& km) const {
  return SenderAnswer(query, km, tables_, config_, *ring_);
}

std::vector<uint64_t> PsiRun(std::span<const uint64_t> receiver_set,
                             std::span<const uint64_t> sender_set,
                             const PsiConfig& config, uint64_t seed,
                             PsiStats* stats) {
  PsiReceiver receiver(config, receiver_set, seed);
  const PsiSender sender(config, sender_set, receiver.hash_key());
  PsiStats local;
  local.rekeys = receiver.hashing().rekeys;
  local.layers = receiver.hashing().layers.size();
  for (size_t n = 0; n < receiver.query_count(); ++n) {
    const PsiQuery query = receiver.MakeQuery(n);
    const OpCounts before = ReadCounters();
    const PsiReply reply = sender.Answer(query, receiver.key_material());
    local.sender_ops = local.sender_ops + (ReadCounters() - before);
    ++local.queries;
    receiver.Consume(n, reply);
  }
  local.non_binary_replies = receiver.non_binary_replies();
  if (stats != nullptr) *stats = local;
  return receiver.Result();
}

std::vector<uint64_t> PlainIntersection(std::span<const uint64_t> a,
                                        std::span<const uint64_t> b) {
  std::vector<uint64_t> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  std::vector<uint64_t> out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                        std::back_inserter(out));
  return out;
}

PsiCost CostModel(uint64_t b, uint64_t k, uint64_t ring_dim, uint64_t digits,
                  uint64_t modulus_bits) {
  if (b <= k || !IsPowerOfTwo(ring_dim) || k >= 63) {
    throw Error(ErrorCode::kInvalidDimension, "need b > k and N = 2^m");
  }
  const uint64_t bins = uint64_t{1} << k;
  const uint64_t queries = (bins + ring_dim - 1) / ring_dim;
  const uint64_t word_bytes = 8 * ((modulus_bits + 63) / 64);
  PsiCost cost;
  cost.query_rlwe_count = (b - k) * digits * queries;
  cost.query_bytes = cost.query_rlwe_count * 2 * ring_dim * word_bytes;
  cost.cmux_per_bin = CmuxTreeCount(b - k, ring_dim);
  cost.total_cmux = cost.cmux_per_bin * bins;
  // A full RGSW per stored bit and element costs 2 dG RLWEs per element;
  // packed, dG RLWEs carry N elements.
  const uint64_t naive_per_element = (b - k) * 2 * digits;
  const uint64_t packed_per_n = (b - k) * digits;
  cost.reduction_factor = naive_per_element * ring_dim / packed_per_n;
  return cost;
}

}  // namespace lutpsi
