#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mptd/algorithms.hpp"
#include "mptd/mdp.hpp"

namespace mptd {

/// The robustness grid {1e-4, 3e-4, ..., 1e-1}, also the default tuning grid.
std::vector<double> default_step_grid();

struct ExperimentConfig {
  BenchmarkId benchmark = BenchmarkId::two_state;
  Algorithm algorithm = Algorithm::td;
  int horizon = 20000;
  std::vector<double> alpha_grid = default_step_grid();
  std::vector<double> beta_grid = default_step_grid();
  double reg = 1.0;
  int n_tuning_seeds = 10;
  int n_eval_seeds = 100;
  std::uint64_t tuning_seed_base = 0;
  std::uint64_t eval_seed_base = 10000;
  double divergence_bound = 1e10;
  int record_stride = 1;
  int jobs = 1;

  /// Throws UsageError on a non-positive horizon or stride, empty grids,
  /// non-positive seed counts, or overlapping seed ranges.
  void validate() const;

  std::vector<std::uint64_t> tuning_seeds() const;
  std::vector<std::uint64_t> eval_seeds() const;
};

struct RunOptions {
  double divergence_bound = 1e10;
  int record_stride = 1;
};

/// RMSVE at steps 0, stride, 2*stride, ... and always at `horizon`.
struct RunResult {
  std::vector<double> rmsve_series;
  bool diverged = false;
};

/// Step indices matching RunResult::rmsve_series for a horizon and stride.
std::vector<int> recorded_steps(int horizon, int record_stride);

/// One trajectory from env.initial_theta (auxiliary variables at zero). The
/// series is frozen at +inf from the first step where ||theta||_inf exceeds
/// the bound or theta/aux holds a non-finite value.
RunResult run_trajectory(const BenchmarkEnv& env, const EvaluationTarget& target,
                         Algorithm algorithm, const StepSizes& step_sizes,
                         int horizon, std::uint64_t seed,
                         const RunOptions& options = {});
RunResult run_trajectory(const BenchmarkEnv& env, Algorithm algorithm,
                         const StepSizes& step_sizes, int horizon,
                         std::uint64_t seed);

/// Mean of the last ceil(len/2) entries.
double steady_state_auc(std::span<const double> series);
/// Mean of the last ceil(len/5) entries.
double tuning_objective(std::span<const double> series);

struct RunSummary {
  double auc = 0.0;
  double final = 0.0;
  bool diverged = false;
};

RunSummary summarize(const RunResult& run);

/// Sample statistics (n-1 denominator; std is 0 when n == 1). Non-finite
/// values flow through the arithmetic untouched.
struct AggregateStats {
  double mean = 0.0;
  double std = 0.0;
  int n_diverged = 0;
  int n = 0;
};

AggregateStats aggregate(std::span<const double> values, int n_diverged = 0);

/// Step sizes actually used by `alg` when the auxiliary rate is shared:
/// beta = alpha for every method outside uses_beta().
StepSizes step_sizes_for(Algorithm alg, double alpha, double beta, double reg);

struct TuneCell {
  double alpha = 0.0;
  double beta = 0.0;
  double objective = 0.0;
};

struct TuneResult {
  StepSizes best;
  double objective = 0.0;
  bool all_non_finite = false;  // warning: every grid point failed
  std::vector<TuneCell> cells;
};

/// Grid search over alpha (and beta for two-rate methods) on the tuning
/// seeds. Non-finite objectives rank last; ties go to the smaller alpha,
/// then the smaller beta.
TuneResult tune(const BenchmarkEnv& env, const ExperimentConfig& config);

struct EvaluationResult {
  StepSizes step_sizes;
  std::vector<std::uint64_t> seeds;
  std::vector<RunSummary> runs;
  AggregateStats auc;
  AggregateStats final;
  std::vector<int> steps;
  std::vector<double> curve_mean;
  std::vector<double> curve_std;
};

EvaluationResult evaluate(const BenchmarkEnv& env, const ExperimentConfig& config,
                          const StepSizes& step_sizes);

struct SweepConfig {
  std::vector<double> alpha_grid = default_step_grid();
  double beta = 0.05;
  double reg = 1.0;
  int n_seeds = 30;
  std::uint64_t seed_base = 20000;
  int horizon = 20000;
  double divergence_bound = 1e10;
  int jobs = 1;
};

struct SweepCell {
  double alpha = 0.0;
  AggregateStats auc;
};

std::vector<SweepCell> robustness_sweep(const BenchmarkEnv& env, Algorithm algorithm,
                                        const SweepConfig& config);

}  // namespace mptd
