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

#include "lutpsi/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "lutpsi/bootstrap.h"
#include "lutpsi/ciphertext.h"
#include "lutpsi/error.h"
#include "lutpsi/expansion.h"
#include "lutpsi/params.h"
#include "lutpsi/polyring.h"
#include "lutpsi/psi.h"
#include "lutpsi/sampler.h"

namespace lutpsi {
namespace {

using Clock = std::chrono::steady_clock;

double Micros(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double, std::micro>(to - from).count();
}

void Summarize(std::vector<double> samples, BenchReport& report) {
  if (samples.empty()) return;
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  report.mean_us = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  report.median_us = n % 2 == 1
                         ? samples[n / 2]
                         : (samples[n / 2 - 1] + samples[n / 2]) / 2;
  // Nearest-rank percentile.
  const size_t rank = static_cast<size_t>(std::ceil(0.95 * n));
  report.p95_us = samples[std::max<size_t>(rank, 1) - 1];
  report.ops_per_sec = report.mean_us > 0 ? 1e6 / report.mean_us : 0;
}

Polynomial RandomPoly(const RingContext& ring, NoiseSampler& sampler,
                      Domain domain = Domain::kCoefficient) {
  Polynomial p(ring.n(), domain);
  for (uint64_t& c : p.coeffs) c = sampler.Uniform(ring.modulus());
  return p;
}

RlweCiphertext RandomRlwe(const RingContext& ring, NoiseSampler& sampler) {
  RlweCiphertext c;
  c.a = RandomPoly(ring, sampler);
  c.b = RandomPoly(ring, sampler);
  return c;
}

// Runs `body` once untimed, then `trials` timed times.
std::vector<double> TimeTrials(size_t trials,
                               const std::function<void()>& prepare,
                               const std::function<void()>& body) {
  std::vector<double> samples;
  samples.reserve(trials);
  prepare();
  body();
  for (size_t i = 0; i < trials; ++i) {
    prepare();
    const Clock::time_point t0 = Clock::now();
    body();
    samples.push_back(Micros(t0, Clock::now()));
  }
  return samples;
}

// Distinct values below `limit`.
std::vector<uint64_t> RandomSet(size_t count, uint64_t limit, Prng& prng) {
  std::vector<uint64_t> out;
  while (out.size() < count) {
    const uint64_t x = prng.Uniform(limit);
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

}  // namespace

int PipelineModel::log_n() const {
  int l = 0;
  while ((uint64_t{1} << l) < ring_dim) ++l;
  return l;
}

PipelineFigures PipelineThroughput(const PipelineModel& model,
                                   PipelineStyle style, uint64_t instances) {
  const uint64_t log_n = static_cast<uint64_t>(model.log_n());
  if (model.dc == 0 || log_n < model.dc) {
    throw Error(ErrorCode::kOutOfRange, "pipeline model needs log N >= dc");
  }
  PipelineFigures f;
  if (style == PipelineStyle::kSymmetric) {
    // Non-pipelined modules: one polynomial per ONL per instance.
    f.polys_per_onl = static_cast<double>(instances);
    f.intt_parallelism = instances;
    f.tf_memory_copies = instances * model.dc;
    f.poly_mult_units = instances * model.dc;
  } else {
    // One input per dc * OSL from the pipelined NTT.
    f.polys_per_onl = static_cast<double>(model.onl()) /
                      static_cast<double>(model.dc * model.osl);
    f.intt_parallelism = (log_n + model.dc - 1) / model.dc;
    f.tf_memory_copies = 1;
    f.poly_mult_units = 1;
  }
  return f;
}

PipelineFigures MatchedSymmetric(const PipelineModel& model) {
  const PipelineFigures one =
      PipelineThroughput(model, PipelineStyle::kSymmetric, 1);
  const PipelineFigures asym =
      PipelineThroughput(model, PipelineStyle::kAsymmetric);
  const double instances = asym.polys_per_onl / one.polys_per_onl;
  PipelineFigures f;
  f.polys_per_onl = instances * one.polys_per_onl;
  f.intt_parallelism = asym.intt_parallelism;
  f.tf_memory_copies =
      static_cast<uint64_t>(std::llround(instances * one.tf_memory_copies));
  f.poly_mult_units =
      static_cast<uint64_t>(std::llround(instances * one.poly_mult_units));
  return f;
}

std::string BenchReport::ToJson() const {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["param"] = param;
  j["trials"] = trials;
  j["parallel"] = parallel;
  j["mean_us"] = mean_us;
  j["median_us"] = median_us;
  j["p95_us"] = p95_us;
  j["ops_per_sec"] = ops_per_sec;
  if (!phases.empty()) {
    nlohmann::ordered_json p;
    for (const auto& [name, seconds] : phases) p[name] = seconds;
    j["phases_s"] = p;
  }
  return j.dump(2);
}

std::string BenchReport::ToText() const {
  std::ostringstream out;
  out << op << " on " << param << ": " << trials << " trials, mean "
      << mean_us << " us, median " << median_us << " us, p95 " << p95_us
      << " us, " << ops_per_sec << " ops/s\n";
  for (const auto& [name, seconds] : phases) {
    out << "  " << name << ": " << seconds << " s\n";
  }
  return out.str();
}

const std::vector<std::string>& BenchOps() {
  static const std::vector<std::string> ops = {
      "ntt", "intt", "external_product", "substitution", "accumulation",
      "psi_e2e"};
  return ops;
}

BenchReport RunBench(const std::string& param, const std::string& op,
                     size_t trials, uint64_t seed, bool parallel) {
  if (std::find(BenchOps().begin(), BenchOps().end(), op) ==
      BenchOps().end()) {
    throw Error(ErrorCode::kNotFound, "unknown bench op " + op);
  }
  const ParameterSet p = BuiltinParams(param);
  const std::shared_ptr<const RingContext> ring_ptr =
      RingContext::Get(p.ring_dim, p.ring_modulus);
  const RingContext& ring = *ring_ptr;
  NoiseSampler sampler(p.sigma, DeriveSeed(SeedFromU64(seed), "bench"));
  BenchReport report;
  report.op = op;
  report.param = p.name;
  report.trials = trials;
  report.parallel = parallel;

  const size_t saved_workers = SenderWorkers();
  SetSenderWorkers(parallel ? 0 : 1);
  std::vector<double> samples;

  if (op == "ntt" || op == "intt") {
    const bool forward = op == "ntt";
    Polynomial x;
    samples = TimeTrials(
        trials,
        [&] {
          x = RandomPoly(ring, sampler,
                         forward ? Domain::kCoefficient : Domain::kNtt);
        },
        [&] {
          if (forward) {
            ring.ForwardInPlace(x.coeffs);
          } else {
            ring.InverseInPlace(x.coeffs);
          }
        });
  } else if (op == "external_product") {
    const RlweSecretKey key = GenerateRlweKey(ring, sampler);
    const RgswCiphertext g =
        RgswEncryptConstant(1, key, p.gadget_base, ring, sampler);
    RlweCiphertext c, out;
    samples = TimeTrials(
        trials, [&] { c = RandomRlwe(ring, sampler); },
        [&] { out = ExternalProduct(c, g, ring); });
  } else if (op == "substitution") {
    const RlweSecretKey key = GenerateRlweKey(ring, sampler);
    const SubstitutionKeySet keys =
        GenerateSubstitutionKeys(key, p.rlwe_ks_base, ring, sampler);
    const uint64_t k = ring.n() + 1;
    RlweCiphertext c, out;
    samples = TimeTrials(
        trials, [&] { c = RandomRlwe(ring, sampler); },
        [&] { out = RlweSubstitute(c, k, keys, ring); });
  } else if (op == "accumulation") {
    const GateSecretKey sk = GenerateGateSecretKey(p, ring, sampler);
    const GateKeys keys = GenerateGateKeys(sk, p, sampler);
    std::vector<uint64_t> a(p.lwe_dim);
    RlweCiphertext acc;
    samples = TimeTrials(
        trials,
        [&] {
          for (uint64_t& v : a) v = sampler.Uniform(p.lwe_modulus);
          acc = AccInit(sampler.Uniform(p.lwe_modulus), Gate::kNand, p, ring);
        },
        [&] { Accumulate(acc, a, keys.bk, p, ring); });
  } else {
    // Sender-side processing of a b = 16, k = 8 run on the PSI-style ring of
    // the same dimension, receiver set of 20 with 5 planted matches.
    PsiConfig config;
    config.params = PsiParams(p.ring_dim);
    config.b = 16;
    config.k = 8;
    Prng prng(DeriveSeed(SeedFromU64(seed), "bench-sets"));
    // The top bin value is reserved for empty bins.
    const uint64_t limit =
        (uint64_t{1} << config.b) - (uint64_t{1} << config.k);
    std::vector<uint64_t> sender = RandomSet(1000, limit, prng);
    std::vector<uint64_t> receiver(sender.begin(), sender.begin() + 5);
    for (uint64_t x : RandomSet(15, limit, prng)) receiver.push_back(x);
    SenderPhaseTimes phases;
    for (size_t i = 0; i < trials; ++i) {
      PsiReceiver r(config, receiver, seed + i);
      const std::shared_ptr<const RingContext> psi_ring =
          RingContext::Get(config.params.ring_dim,
                           config.params.ring_modulus);
      const SenderTables tables = BuildSenderTables(
          sender, PermutationHash(config.b, config.k, r.hash_key()));
      double total = 0;
      for (size_t n = 0; n < r.query_count(); ++n) {
        const PsiQuery q = r.MakeQuery(n);
        const Clock::time_point t0 = Clock::now();
        const PsiReply reply = SenderAnswer(q, r.key_material(), tables,
                                            config, *psi_ring, &phases);
        total += Micros(t0, Clock::now());
        r.Consume(n, reply);
      }
      samples.push_back(total);
    }
    const double per = trials == 0 ? 0 : 1.0 / static_cast<double>(trials);
    report.phases = {{"substitution", phases.substitution * per},
                     {"external_product", phases.external_product * per},
                     {"rgsw_transfer", phases.rgsw_transfer * per},
                     {"post_process", phases.post_process * per}};
  }
  SetSenderWorkers(saved_workers);
  Summarize(std::move(samples), report);
  return report;
}

}  // namespace lutpsi
