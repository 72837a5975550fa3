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

// fhe: parameter listing, NAND bootstrapping trials and micro-benchmarks.

#include <cmath>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli_common.h"
#include "lutpsi/bench.h"
#include "lutpsi/bootstrap.h"
#include "lutpsi/params.h"
#include "lutpsi/sampler.h"

namespace lutpsi {
namespace {

int RunParams(const std::string& name) {
  if (name.empty()) {
    for (const std::string& n : BuiltinParamNames()) {
      std::cout << FormatParams(BuiltinParams(n)) << "\n";
    }
    return kExitOk;
  }
  const ParameterSet p = BuiltinParams(name);
  Validate(p);
  std::cout << FormatParams(p);
  return kExitOk;
}

int RunNand(const std::string& name, size_t trials, uint64_t seed) {
  const ParameterSet p = BuiltinParams(name);
  NoiseSampler sampler(p.sigma, DeriveSeed(SeedFromU64(seed), "fhe-nand"));
  const auto ring = RingContext::Get(p.ring_dim, p.ring_modulus);
  const GateSecretKey sk = GenerateGateSecretKey(p, *ring, sampler);
  const GateKeys keys = GenerateGateKeys(sk, p, sampler);
  size_t failures = 0;
  double noise_sum = 0, noise_sq = 0;
  size_t samples = 0;
  for (uint64_t m1 = 0; m1 < 2; ++m1) {
    for (uint64_t m2 = 0; m2 < 2; ++m2) {
      const uint64_t want = 1 - (m1 & m2);
      size_t pass = 0;
      for (size_t i = 0; i < trials; ++i) {
        const LweCiphertext out =
            BootstrapNand(EncryptBit(m1, sk, p, sampler),
                          EncryptBit(m2, sk, p, sampler), keys);
        if (DecryptBit(out, sk) == want) ++pass;
        const double e = static_cast<double>(BitNoise(out, sk));
        noise_sum += e;
        noise_sq += e * e;
        ++samples;
      }
      failures += trials - pass;
      std::cout << "NAND(" << m1 << "," << m2 << ") = " << want << ": "
                << pass << "/" << trials << " pass\n";
    }
  }
  const double mean = samples == 0 ? 0 : noise_sum / samples;
  const double var = samples == 0 ? 0 : noise_sq / samples - mean * mean;
  std::cout << "output noise (mod q): mean " << mean << ", std "
            << std::sqrt(std::max(var, 0.0)) << "\n";
  std::cout << (failures == 0 ? "all pass" : "FAILURES: ") ;
  if (failures != 0) std::cout << failures;
  std::cout << "\n";
  return failures == 0 ? kExitOk : kExitInternal;
}

}  // namespace
}  // namespace lutpsi

int main(int argc, char** argv) {
  using namespace lutpsi;
  CLI::App app{"FHE primitives: parameters, NAND bootstrapping, benchmarks"};
  app.require_subcommand(1);

  std::string params_name;
  CLI::App* params = app.add_subcommand("params", "Print parameter sets");
  params->add_option("--param", params_name, "Set name (default: all)");

  std::string nand_param = "MEDIUM";
  size_t nand_trials = 1000;
  uint64_t nand_seed = 1;
  CLI::App* nand =
      app.add_subcommand("nand", "Bootstrapped NAND truth-table trials");
  nand->add_option("--param", nand_param, "Parameter set")
      ->capture_default_str();
  nand->add_option("--trials", nand_trials, "Trials per input pair")
      ->capture_default_str();
  nand->add_option("--seed", nand_seed, "Seed")->capture_default_str();

  std::string bench_param = "MEDIUM";
  std::string bench_op = "ntt";
  size_t bench_trials = 100;
  uint64_t bench_seed = 1;
  bool bench_json = false;
  bool bench_parallel = false;
  CLI::App* bench = app.add_subcommand("bench", "Time one operation");
  bench->add_option("--param", bench_param, "Parameter set")
      ->capture_default_str();
  bench->add_option("--op", bench_op, "Operation")
      ->check(CLI::IsMember(BenchOps()))
      ->capture_default_str();
  bench->add_option("--trials", bench_trials, "Timed trials")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed, "Seed")->capture_default_str();
  bench->add_flag("--json", bench_json, "Print JSON");
  bench->add_flag("--parallel", bench_parallel, "Use all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*params) return RunParams(params_name);
    if (*nand) return RunNand(nand_param, nand_trials, nand_seed);
    const BenchReport r = RunBench(bench_param, bench_op, bench_trials,
                                   bench_seed, bench_parallel);
    std::cout << (bench_json ? r.ToJson() + "\n" : r.ToText());
    return kExitOk;
  } catch (const Error& e) {
    return ReportError(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
