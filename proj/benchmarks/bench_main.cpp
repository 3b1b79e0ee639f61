#include <benchmark/benchmark.h>

#include "mptd/algorithms.hpp"
#include "mptd/benchmarks.hpp"
#include "mptd/harness.hpp"
#include "mptd/saddle.hpp"

namespace {

// Single updates on a fixed Boyan transition stream; arg = algorithm index.
void BM_Step(benchmark::State& state) {
  const auto alg = mptd::all_algorithms()[state.range(0)];
  const auto env = mptd::make_benchmark(mptd::BenchmarkId::boyan_chain);
  mptd::Rng rng(1);
  std::vector<mptd::Transition> stream;
  int s = mptd::initial_state(env, rng);
  for (int k = 0; k < 1024; ++k) {
    stream.push_back(mptd::sample_transition(env, s, rng));
    s = mptd::continuation_state(env, stream.back(), rng);
  }
  mptd::AgentState st = mptd::AgentState::initial(env.initial_theta);
  std::size_t k = 0;
  for (auto _ : state) {
    st = mptd::step(alg, st, stream[k++ & 1023], env.mdp.gamma, {1e-3, 1e-3, 1.0});
    benchmark::DoNotOptimize(st.theta.data());
  }
  state.SetLabel(mptd::to_string(alg));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step)->DenseRange(0, 8);

void BM_Trajectory(benchmark::State& state) {
  const auto env = mptd::make_benchmark(static_cast<mptd::BenchmarkId>(state.range(0)));
  const auto target = mptd::EvaluationTarget::for_env(env);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto run = mptd::run_trajectory(env, target, mptd::Algorithm::sthtd_mp, {0.01, 0.01, 1.0},
                                    20000, seed++);
    benchmark::DoNotOptimize(run.rmsve_series.data());
  }
  state.SetLabel(env.name);
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_Trajectory)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Analysis(benchmark::State& state) {
  const auto env = mptd::make_benchmark(static_cast<mptd::BenchmarkId>(state.range(0)));
  const auto grid = mptd::default_contraction_grid();
  for (auto _ : state) {
    const auto mm = mptd::build_mean_matrices(env);
    for (auto metric : {mptd::Metric::C, mptd::Metric::H}) {
      auto report = mptd::rate_report(mm, metric, grid);
      auto key = mptd::key_matrix(mm, metric);
      benchmark::DoNotOptimize(report.q_best);
      benchmark::DoNotOptimize(key.condition_number);
    }
  }
  state.SetLabel(env.name);
}
BENCHMARK(BM_Analysis)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
