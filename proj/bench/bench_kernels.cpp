// Serial reference loops against their OpenMP versions. Run with
// OMP_NUM_THREADS set to compare scaling.

#include "policygame/dynamics.hpp"
#include "policygame/electorate.hpp"
#include "policygame/grid_solver.hpp"
#include "policygame/monotonicity.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace policygame;

Exec exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void BM_GbaPsne(benchmark::State& state) {
  const auto inst = sample_instances(1, 3, 7).front();
  GbaOptions opts;
  opts.epsilon = 0.02;
  opts.best_response = state.range(1) == 0 ? BestResponse::ternary : BestResponse::exhaustive;
  for (auto _ : state) {
    auto r = gba_psne(inst, opts, exec_of(state));
    benchmark::DoNotOptimize(r.max_gain);
    state.counters["payoff_evals"] = static_cast<double>(r.payoff_evals);
  }
}
BENCHMARK(BM_GbaPsne)->ArgsProduct({{0, 1}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_AscentBatch(benchmark::State& state) {
  BatchSpec spec;
  spec.instances = sample_instances(4, 2, 42);
  spec.inits_per_instance = 4;
  for (auto _ : state) {
    auto rows = run_batch(spec, exec_of(state));
    benchmark::DoNotOptimize(rows.data());
  }
}
BENCHMARK(BM_AscentBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonotonicityProbe(benchmark::State& state) {
  const auto params = ReducedParams::make(1.0, 1.0, 1.2, 0.6, 0.6);
  for (auto _ : state) {
    auto r = monotonicity_probe(params, 200000, 42, ProbeSpace::cosine, exec_of(state));
    benchmark::DoNotOptimize(r.s);
  }
}
BENCHMARK(BM_MonotonicityProbe)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_VoteTrials(benchmark::State& state) {
  SimConfig cfg;
  cfg.trials = 2000;
  cfg.criterion = Criterion::softmax;
  for (auto _ : state) {
    auto records = run_trials(cfg, {}, exec_of(state));
    benchmark::DoNotOptimize(records.data());
  }
}
BENCHMARK(BM_VoteTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
