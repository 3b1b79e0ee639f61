#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mptd/algorithms.hpp"
#include "mptd/harness.hpp"
#include "mptd/mdp.hpp"

namespace mptd::cli {

/// Everything a command needs. Built from the JSON config (if any) and then
/// overridden by command-line flags.
struct CliConfig {
  std::string command;
  // Benchmark ids, or paths to environment JSON files (ending in .json).
  std::vector<std::string> benchmarks;
  std::vector<Algorithm> algorithms;
  ExperimentConfig experiment;
  SweepConfig sweep;
  std::uint64_t seed = 0;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string out_dir = "results";
};

/// Flag values as parsed; unset optionals leave the config untouched.
struct FlagOverrides {
  std::optional<std::string> config_path;
  std::optional<std::string> benchmarks;  // comma separated
  std::optional<std::string> algorithms;  // comma separated
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> horizon;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
};

/// JSON schema (every key optional, unknown keys rejected):
///   benchmarks, algorithms: [string]
///   horizon, n_tuning_seeds, n_eval_seeds, record_stride, jobs: int
///   tuning_seed_base, eval_seed_base, seed: uint
///   alpha_grid, beta_grid: [number]; reg, divergence_bound, alpha, beta: number
///   out: string
///   sweep: {alpha_grid, beta, reg, n_seeds, seed_base, horizon}
CliConfig load_config(const std::string& command, const FlagOverrides& flags);

std::vector<std::string> split_list(const std::string& text);

struct NamedEnv {
  std::string name;
  BenchmarkEnv env;
};

/// A built-in benchmark id or an environment JSON file.
NamedEnv load_env(const std::string& entry);

}  // namespace mptd::cli
