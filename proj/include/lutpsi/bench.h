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

// Micro-benchmarks of the scheme's inner operations and an analytical
// model of NTT pipeline organisations.

#ifndef LUTPSI_BENCH_H_
#define LUTPSI_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lutpsi {

// Counts only; OSL is one abstract time unit per NTT stage.
struct PipelineModel {
  uint64_t ring_dim = 2048;
  uint64_t dc = 3;  // polynomials per decomposed input
  uint64_t osl = 1;

  int log_n() const;
  uint64_t onl() const { return static_cast<uint64_t>(log_n()) * osl; }
};

enum class PipelineStyle { kSymmetric, kAsymmetric };

struct PipelineFigures {
  double polys_per_onl = 0;
  uint64_t intt_parallelism = 0;  // INTT modules running side by side
  uint64_t tf_memory_copies = 0;
  uint64_t poly_mult_units = 0;
};

// Symmetric: `instances` independent pipelines, each with one INTT, dc
// NTTs (each holding a full twiddle table) and dc multipliers.
// Asymmetric: one pipelined NTT fed by ceil(log N / dc) INTTs, one twiddle
// table and one multiplier. Throws kOutOfRange if log N < dc.
PipelineFigures PipelineThroughput(const PipelineModel& model,
                                   PipelineStyle style,
                                   uint64_t instances = 1);

// The symmetric organisation scaled (fractionally) to the asymmetric
// throughput: log N / dc instances, hence log N NTTs and multipliers.
PipelineFigures MatchedSymmetric(const PipelineModel& model);

struct BenchReport {
  std::string op;
  std::string param;
  size_t trials = 0;
  bool parallel = false;
  double mean_us = 0;
  double median_us = 0;
  double p95_us = 0;
  double ops_per_sec = 0;
  // Named parts of one trial in seconds, psi_e2e only.
  std::vector<std::pair<std::string, double>> phases;

  std::string ToJson() const;
  std::string ToText() const;
};

const std::vector<std::string>& BenchOps();

// Throws kNotFound for an unknown param or op. Inputs derive from `seed`;
// timing covers only the operation itself.
BenchReport RunBench(const std::string& param, const std::string& op,
                     size_t trials, uint64_t seed = 1, bool parallel = false);

}  // namespace lutpsi

#endif  // LUTPSI_BENCH_H_
