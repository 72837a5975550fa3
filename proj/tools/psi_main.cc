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

// psi: network Sender and Receiver for the LUT-based PSI protocol, plus the
// analytical cost model.

#include <chrono>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli_common.h"
#include "lutpsi/netproto.h"
#include "lutpsi/params.h"
#include "lutpsi/psi.h"

namespace lutpsi {
namespace {

PsiConfig MakeConfig(const std::string& param, uint64_t b, uint64_t k) {
  PsiConfig config;
  config.params = BuiltinParams(param);
  config.b = b;
  config.k = k;
  ValidatePsiConfig(config);
  return config;
}

int RunSender(const std::string& endpoint, const std::string& set_path,
              const PsiConfig& config, size_t sessions, double timeout_s) {
  SenderContext ctx{config, ReadSetFile(set_path),
                    std::chrono::milliseconds(
                        static_cast<int64_t>(timeout_s * 1000))};
  for (uint64_t x : ctx.set) {
    if (config.b < 64 && (x >> config.b) != 0) {
      throw Error(ErrorCode::kOutOfRange,
                  "set element " + std::to_string(x) + " exceeds " +
                      std::to_string(config.b) + " bits");
    }
  }
  const auto [host, port] = ParseEndpoint(endpoint);
  TcpListener listener(host, port);
  std::cout << "listening on " << host << ":" << listener.port() << "\n"
            << std::flush;
  ServeForever(listener, ctx, sessions, [](const std::string& line) {
    std::cerr << line << "\n";
  });
  return kExitOk;
}

int RunReceiver(const std::string& endpoint, const std::string& set_path,
                const std::string& out_path, const PsiConfig& config,
                uint64_t seed, double timeout_s) {
  const std::vector<uint64_t> set = ReadSetFile(set_path);
  const auto [host, port] = ParseEndpoint(endpoint);
  const auto timeout = std::chrono::milliseconds(
      static_cast<int64_t>(timeout_s * 1000));
  std::unique_ptr<Transport> t = TcpConnect(host, port, timeout);
  t->set_timeout(timeout);
  SessionSummary summary;
  const std::vector<uint64_t> result =
      ReceiverSession(*t, set, config, seed, &summary);
  t->Close();
  WriteSetFile(out_path, result);
  std::cerr << "intersection: " << result.size() << " elements, "
            << summary.queries << " queries, key material "
            << summary.key_material_bytes << " bytes, queries "
            << summary.query_bytes << " bytes, replies "
            << summary.reply_bytes << " bytes\n";
  return kExitOk;
}

int RunCost(uint64_t b, uint64_t k, uint64_t n, uint64_t digits,
            uint64_t modulus_bits) {
  const PsiCost c = CostModel(b, k, n, digits, modulus_bits);
  std::cout << "query_rlwe_count=" << c.query_rlwe_count << "\n"
            << "query_bytes=" << c.query_bytes << "\n"
            << "query_mib=" << static_cast<double>(c.query_bytes) / (1 << 20)
            << "\n"
            << "cmux_per_bin=" << c.cmux_per_bin << "\n"
            << "total_cmux=" << c.total_cmux << "\n"
            << "reduction_factor=" << c.reduction_factor << "\n";
  return kExitOk;
}

}  // namespace
}  // namespace lutpsi

int main(int argc, char** argv) {
  using namespace lutpsi;
  CLI::App app{"Unbalanced PSI from homomorphic table lookups"};
  app.require_subcommand(1);

  std::string param = "PSI2048";
  uint64_t b = 16, k = 8;
  std::string set_path;
  double timeout_s = 600;

  std::string listen;
  size_t sessions = 0;
  size_t workers = 0;
  CLI::App* sender = app.add_subcommand("sender", "Serve the Sender side");
  sender->add_option("--listen", listen, "HOST:PORT (port 0 picks one)")
      ->required();
  sender->add_option("--set", set_path, "Sender set file")->required();
  sender->add_option("--param", param, "Parameter set")->capture_default_str();
  sender->add_option("--b", b, "Element bit width")->capture_default_str();
  sender->add_option("--k", k, "log2 of the hash table size")
      ->capture_default_str();
  sender->add_option("--sessions", sessions,
                     "Exit after this many sessions (0: run forever)")
      ->capture_default_str();
  sender->add_option("--workers", workers, "Worker threads (0: all cores)")
      ->capture_default_str();
  sender->add_option("--timeout", timeout_s, "Seconds per read")
      ->capture_default_str();

  std::string connect, out_path;
  uint64_t seed = 1;
  CLI::App* receiver =
      app.add_subcommand("receiver", "Run one Receiver session");
  receiver->add_option("--connect", connect, "HOST:PORT")->required();
  receiver->add_option("--set", set_path, "Receiver set file")->required();
  receiver->add_option("--out", out_path, "Intersection output file")
      ->required();
  receiver->add_option("--param", param, "Parameter set")
      ->capture_default_str();
  receiver->add_option("--b", b, "Element bit width")->capture_default_str();
  receiver->add_option("--k", k, "log2 of the hash table size")
      ->capture_default_str();
  receiver->add_option("--seed", seed, "Seed")->capture_default_str();
  receiver->add_option("--timeout", timeout_s, "Seconds per read")
      ->capture_default_str();

  uint64_t cost_n = 2048, cost_digits = 6, cost_bits = 54;
  uint64_t cost_b = 32, cost_k = 14;
  CLI::App* cost = app.add_subcommand("cost", "Analytical cost model");
  cost->add_option("--b", cost_b, "Element bit width")->capture_default_str();
  cost->add_option("--k", cost_k, "log2 of the hash table size")
      ->capture_default_str();
  cost->add_option("--N", cost_n, "Ring dimension")->capture_default_str();
  cost->add_option("--digits", cost_digits, "Gadget digits dG")
      ->capture_default_str();
  cost->add_option("--modulus-bits", cost_bits, "Bits of Q")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cost) return RunCost(cost_b, cost_k, cost_n, cost_digits, cost_bits);
    const PsiConfig config = MakeConfig(param, b, k);
    if (*sender) {
      SetSenderWorkers(workers);
      return RunSender(listen, set_path, config, sessions, timeout_s);
    }
    return RunReceiver(connect, set_path, out_path, config, seed, timeout_s);
  } catch (const Error& e) {
    return ReportError(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
