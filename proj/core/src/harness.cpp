#include "mptd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "mptd/error.hpp"

namespace mptd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename T, typename Fn>
std::vector<T> parallel_map(int n, int jobs, Fn fn) {
  std::vector<T> out(static_cast<std::size_t>(n));
  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double tail_mean(std::span<const double> series, std::size_t count) {
  if (series.empty()) throw UsageError("summary of an empty series");
  double total = 0.0;
  for (std::size_t i = series.size() - count; i < series.size(); ++i) {
    total += series[i];
  }
  return total / static_cast<double>(count);
}

bool out_of_bounds(const AgentState& st, double bound) {
  if (!st.theta.allFinite() || !st.aux.allFinite()) return true;
  return st.theta.size() > 0 && st.theta.cwiseAbs().maxCoeff() > bound;
}

// Objective used for ordering: non-finite maps to +inf.
double rank_key(double objective) {
  return std::isfinite(objective) ? objective : kInf;
}

}  // namespace

std::vector<double> default_step_grid() {
  return {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
}

void ExperimentConfig::validate() const {
  if (horizon <= 0) throw UsageError("horizon must be positive");
  if (record_stride <= 0) throw UsageError("record stride must be positive");
  if (alpha_grid.empty() || beta_grid.empty()) throw UsageError("step-size grids must be non-empty");
  if (n_tuning_seeds <= 0 || n_eval_seeds <= 0) throw UsageError("seed counts must be positive");
  if (!(divergence_bound > 0.0)) throw UsageError("divergence bound must be positive");
  if (jobs <= 0) throw UsageError("jobs must be positive");
  const std::uint64_t tune_end = tuning_seed_base + static_cast<std::uint64_t>(n_tuning_seeds);
  const std::uint64_t eval_end = eval_seed_base + static_cast<std::uint64_t>(n_eval_seeds);
  if (tuning_seed_base < eval_end && eval_seed_base < tune_end) {
    throw UsageError("tuning and evaluation seed ranges overlap");
  }
}

std::vector<std::uint64_t> ExperimentConfig::tuning_seeds() const {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_tuning_seeds));
  for (int i = 0; i < n_tuning_seeds; ++i) seeds[i] = tuning_seed_base + i;
  return seeds;
}

std::vector<std::uint64_t> ExperimentConfig::eval_seeds() const {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_eval_seeds));
  for (int i = 0; i < n_eval_seeds; ++i) seeds[i] = eval_seed_base + i;
  return seeds;
}

std::vector<int> recorded_steps(int horizon, int record_stride) {
  if (horizon < 0 || record_stride <= 0) throw UsageError("bad horizon or stride");
  std::vector<int> steps;
  for (int t = 0; t <= horizon; t += record_stride) steps.push_back(t);
  if (steps.back() != horizon) steps.push_back(horizon);
  return steps;
}

RunResult run_trajectory(const BenchmarkEnv& env, const EvaluationTarget& target,
                         Algorithm algorithm, const StepSizes& step_sizes,
                         int horizon, std::uint64_t seed,
                         const RunOptions& options) {
  const std::vector<int> steps = recorded_steps(horizon, options.record_stride);
  RunResult result;
  result.rmsve_series.reserve(steps.size());

  Rng rng(seed);
  AgentState st = AgentState::initial(env.initial_theta);
  const double gamma = env.mdp.gamma;
  auto error = [&] { return rmsve(st.theta, env, target.d_mu, target.v_pi); };

  std::size_t next = 0;
  if (out_of_bounds(st, options.divergence_bound)) {
    result.diverged = true;
    result.rmsve_series.assign(steps.size(), kInf);
    return result;
  }
  result.rmsve_series.push_back(error());
  ++next;

  int s = initial_state(env, rng);
  for (int t = 1; t <= horizon; ++t) {
    const Transition tr = sample_transition(env, s, rng);
    st = step(algorithm, st, tr, gamma, step_sizes);
    s = continuation_state(env, tr, rng);
    if (out_of_bounds(st, options.divergence_bound)) {
      result.diverged = true;
      result.rmsve_series.resize(steps.size(), kInf);
      return result;
    }
    if (next < steps.size() && steps[next] == t) {
      result.rmsve_series.push_back(error());
      ++next;
    }
  }
  return result;
}

RunResult run_trajectory(const BenchmarkEnv& env, Algorithm algorithm,
                         const StepSizes& step_sizes, int horizon,
                         std::uint64_t seed) {
  return run_trajectory(env, EvaluationTarget::for_env(env), algorithm, step_sizes,
                        horizon, seed);
}

double steady_state_auc(std::span<const double> series) {
  return tail_mean(series, (series.size() + 1) / 2);
}

double tuning_objective(std::span<const double> series) {
  return tail_mean(series, (series.size() + 4) / 5);
}

RunSummary summarize(const RunResult& run) {
  RunSummary summary;
  summary.auc = steady_state_auc(run.rmsve_series);
  summary.final = run.rmsve_series.back();
  summary.diverged = run.diverged;
  return summary;
}

AggregateStats aggregate(std::span<const double> values, int n_diverged) {
  AggregateStats stats;
  stats.n = static_cast<int>(values.size());
  stats.n_diverged = n_diverged;
  if (values.empty()) throw UsageError("aggregate of an empty sample");
  // Mean as an offset from the first value, so a constant sample has an exact
  // mean and a zero std. A non-finite sample falls back to the plain sum.
  const bool finite = std::all_of(values.begin(), values.end(),
                                  [](double v) { return std::isfinite(v); });
  const double shift = finite ? values[0] : 0.0;
  double total = 0.0;
  for (double v : values) total += v - shift;
  stats.mean = shift + total / stats.n;
  if (stats.n == 1) {
    stats.std = 0.0;
    return stats;
  }
  double sq = 0.0;
  for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
  stats.std = std::sqrt(sq / (stats.n - 1));
  return stats;
}

StepSizes step_sizes_for(Algorithm alg, double alpha, double beta, double reg) {
  StepSizes ss;
  ss.alpha = alpha;
  ss.beta = uses_beta(alg) ? beta : alpha;
  ss.reg = reg;
  return ss;
}

TuneResult tune(const BenchmarkEnv& env, const ExperimentConfig& config) {
  config.validate();
  const EvaluationTarget target = EvaluationTarget::for_env(env);

  std::vector<double> alphas = config.alpha_grid;
  std::vector<double> betas =
      uses_beta(config.algorithm) ? config.beta_grid : std::vector<double>{0.0};
  std::sort(alphas.begin(), alphas.end());
  std::sort(betas.begin(), betas.end());

  TuneResult result;
  for (double a : alphas) {
    for (double b : betas) {
      result.cells.push_back({a, uses_beta(config.algorithm) ? b : a, 0.0});
    }
  }

  const std::vector<std::uint64_t> seeds = config.tuning_seeds();
  const int n_seeds = static_cast<int>(seeds.size());
  const int n_jobs = static_cast<int>(result.cells.size()) * n_seeds;
  RunOptions options{config.divergence_bound, config.record_stride};
  const std::vector<double> objectives = parallel_map<double>(
      n_jobs, config.jobs, [&](int i) {
        const TuneCell& cell = result.cells[i / n_seeds];
        const StepSizes ss =
            step_sizes_for(config.algorithm, cell.alpha, cell.beta, config.reg);
        const RunResult run = run_trajectory(env, target, config.algorithm, ss,
                                             config.horizon, seeds[i % n_seeds], options);
        return tuning_objective(run.rmsve_series);
      });

  std::size_t best = 0;
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    double total = 0.0;
    for (int k = 0; k < n_seeds; ++k) total += objectives[c * n_seeds + k];
    result.cells[c].objective = total / n_seeds;
    if (rank_key(result.cells[c].objective) < rank_key(result.cells[best].objective)) {
      best = c;
    }
  }
  result.all_non_finite = !std::isfinite(result.cells[best].objective);
  result.best = step_sizes_for(config.algorithm, result.cells[best].alpha,
                               result.cells[best].beta, config.reg);
  result.objective = result.cells[best].objective;
  return result;
}

EvaluationResult evaluate(const BenchmarkEnv& env, const ExperimentConfig& config,
                          const StepSizes& step_sizes) {
  config.validate();
  const EvaluationTarget target = EvaluationTarget::for_env(env);
  EvaluationResult result;
  result.step_sizes = step_sizes;
  result.seeds = config.eval_seeds();
  result.steps = recorded_steps(config.horizon, config.record_stride);

  const RunOptions options{config.divergence_bound, config.record_stride};
  const int n = static_cast<int>(result.seeds.size());
  const std::vector<RunResult> runs =
      parallel_map<RunResult>(n, config.jobs, [&](int i) {
        return run_trajectory(env, target, config.algorithm, step_sizes,
                              config.horizon, result.seeds[i], options);
      });

  std::vector<double> aucs;
  std::vector<double> finals;
  int n_diverged = 0;
  for (const RunResult& run : runs) {
    result.runs.push_back(summarize(run));
    aucs.push_back(result.runs.back().auc);
    finals.push_back(result.runs.back().final);
    n_diverged += run.diverged ? 1 : 0;
  }
  result.auc = aggregate(aucs, n_diverged);
  result.final = aggregate(finals, n_diverged);

  std::vector<double> column(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < result.steps.size(); ++k) {
    for (int i = 0; i < n; ++i) column[i] = runs[i].rmsve_series[k];
    const AggregateStats stats = aggregate(column);
    result.curve_mean.push_back(stats.mean);
    result.curve_std.push_back(stats.std);
  }
  return result;
}

std::vector<SweepCell> robustness_sweep(const BenchmarkEnv& env, Algorithm algorithm,
                                        const SweepConfig& config) {
  if (config.alpha_grid.empty()) throw UsageError("sweep grid must be non-empty");
  if (config.n_seeds <= 0 || config.horizon <= 0) {
    throw UsageError("sweep needs positive seeds and horizon");
  }
  const EvaluationTarget target = EvaluationTarget::for_env(env);
  const int n_cells = static_cast<int>(config.alpha_grid.size());
  const int n_seeds = config.n_seeds;
  const RunOptions options{config.divergence_bound, 1};
  const std::vector<RunSummary> runs = parallel_map<RunSummary>(
      n_cells * n_seeds, config.jobs, [&](int i) {
        const StepSizes ss = step_sizes_for(algorithm, config.alpha_grid[i / n_seeds],
                                            config.beta, config.reg);
        return summarize(run_trajectory(env, target, algorithm, ss, config.horizon,
                                        config.seed_base + (i % n_seeds), options));
      });

  std::vector<SweepCell> cells;
  for (int c = 0; c < n_cells; ++c) {
    std::vector<double> aucs;
    int n_diverged = 0;
    for (int k = 0; k < n_seeds; ++k) {
      aucs.push_back(runs[c * n_seeds + k].auc);
      n_diverged += runs[c * n_seeds + k].diverged ? 1 : 0;
    }
    cells.push_back({config.alpha_grid[c], aggregate(aucs, n_diverged)});
  }
  return cells;
}

}  // namespace mptd
