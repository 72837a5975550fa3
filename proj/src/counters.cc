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


#include "lutpsi/counters.h"

#include <atomic>

namespace lutpsi {
namespace {

std::atomic<uint64_t> external_products{0};
std::atomic<uint64_t> substitutions{0};
std::atomic<uint64_t> rlwe_key_switches{0};
std::atomic<uint64_t> lwe_key_switches{0};
std::atomic<uint64_t> forward_ntts{0};
std::atomic<uint64_t> inverse_ntts{0};

}  // namespace

OpCounts OpCounts::operator+(const OpCounts& other) const {
  OpCounts d;
  d.external_products = external_products + other.external_products;
  d.substitutions = substitutions + other.substitutions;
  d.rlwe_key_switches = rlwe_key_switches + other.rlwe_key_switches;
  d.lwe_key_switches = lwe_key_switches + other.lwe_key_switches;
  d.forward_ntts = forward_ntts + other.forward_ntts;
  d.inverse_ntts = inverse_ntts + other.inverse_ntts;
  return d;
}

OpCounts OpCounts::operator-(const OpCounts& other) const {
  OpCounts d;
  d.external_products = external_products - other.external_products;
  d.substitutions = substitutions - other.substitutions;
  d.rlwe_key_switches = rlwe_key_switches - other.rlwe_key_switches;
  d.lwe_key_switches = lwe_key_switches - other.lwe_key_switches;
  d.forward_ntts = forward_ntts - other.forward_ntts;
  d.inverse_ntts = inverse_ntts - other.inverse_ntts;
  return d;
}

OpCounts ReadCounters() {
  OpCounts c;
  c.external_products = external_products.load(std::memory_order_relaxed);
  c.substitutions = substitutions.load(std::memory_order_relaxed);
  c.rlwe_key_switches = rlwe_key_switches.load(std::memory_order_relaxed);
  c.lwe_key_switches = lwe_key_switches.load(std::memory_order_relaxed);
  c.forward_ntts = forward_ntts.load(std::memory_order_relaxed);
  c.inverse_ntts = inverse_ntts.load(std::memory_order_relaxed);
  return c;
}

void ResetCounters() {
  external_products = 0;
  substitutions = 0;
  rlwe_key_switches = 0;
  lwe_key_switches = 0;
  forward_ntts = 0;
  inverse_ntts = 0;
}

namespace internal {
void CountExternalProduct() {
  external_products.fetch_add(1, std::memory_order_relaxed);
}
void CountSubstitution() {
  substitutions.fetch_add(1, std::memory_order_relaxed);
}
void CountRlweKeySwitch() {
  rlwe_key_switches.fetch_add(1, std::memory_order_relaxed);
}
void CountLweKeySwitch() {
  lwe_key_switches.fetch_add(1, std::memory_order_relaxed);
}
void CountForwardNtts(uint64_t count) {
  forward_ntts.fetch_add(count, std::memory_order_relaxed);
}
void CountInverseNtts(uint64_t count) {
  inverse_ntts.fetch_add(count, std::memory_order_relaxed);
}
}  // namespace internal

}  // namespace lutpsi
