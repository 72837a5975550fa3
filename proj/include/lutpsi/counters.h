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


// Process-wide operation counters used to check work accounting (for
// example, that a LUT evaluation issues exactly the expected number of
// external products). Counting is always on; increments are relaxed atomics.

#ifndef LUTPSI_COUNTERS_H_
#define LUTPSI_COUNTERS_H_

#include <cstdint>

namespace lutpsi {

struct OpCounts {
  uint64_t external_products = 0;
  uint64_t substitutions = 0;
  uint64_t rlwe_key_switches = 0;
  uint64_t lwe_key_switches = 0;
  uint64_t forward_ntts = 0;
  uint64_t inverse_ntts = 0;

  OpCounts operator+(const OpCounts& other) const;
  OpCounts operator-(const OpCounts& other) const;
  bool operator==(const OpCounts&) const = default;
};

OpCounts ReadCounters();
void ResetCounters();

namespace internal {
void CountExternalProduct();
void CountSubstitution();
void CountRlweKeySwitch();
void CountLweKeySwitch();
void CountForwardNtts(uint64_t count);
void CountInverseNtts(uint64_t count);
}  // namespace internal

}  // namespace lutpsi

#endif  // LUTPSI_COUNTERS_H_
