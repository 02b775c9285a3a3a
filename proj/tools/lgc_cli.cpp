// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Runs one experiment config and exits with
// 0 on success, 2 for configuration or I/O problems, 3 when a numeric
// precondition fails and 1 otherwise.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lgc/lgc.h"

int main(int argc, char** argv) {
  CLI::App app{"Lattice Gaussian coding experiments"};
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<int> threads;
  app.add_option("-c,--config", config, "experiment config file")->required();
  app.add_option("-o,--out", out, "output path (.csv or .json)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "worker threads (env LGC_THREADS)")
      ->check(CLI::PositiveNumber);
  app.footer(
      "Configs are `key = value` lines. When snr is given, sigma is fixed to 1\n"
      "and sigma0 = sqrt(snr). One `sweep.<axis> = v1, v2, ...` line (axis\n"
      "sigma0, sigma, snr, mu or volume) produces one row per grid value.");
  app.set_version_flag("--version", std::string(lgc_version()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config: " << e.what() << '\n';
    return 2;
  }

  if (!threads) {
    if (const char* env = std::getenv("LGC_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1 || v > 4096) {
        std::cerr << "config: LGC_THREADS must be a positive integer\n";
        return 2;
      }
      threads = static_cast<int>(v);
    }
  }

  lgc_run_options options{};
  if (out) options.out_path = out->c_str();
  if (seed) options.seed = &*seed;
  if (trials) options.trials = &*trials;
  if (threads) options.threads = &*threads;

  int exit_code = 1;
  const lgc_status status = lgc_run(config.c_str(), &options, &exit_code);
  std::fflush(stdout);
  if (status != LGC_OK) {
    std::cerr << "internal: " << lgc_last_error() << '\n';
    return 1;
  }
  if (exit_code != 0) std::cerr << lgc_last_error() << '\n';
  return exit_code;
}
