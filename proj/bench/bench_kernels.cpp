// Serial versus parallel timings of the sampling kernels. Results are
// identical in both modes; only wall time differs. Set HQSDP_THREADS to pin
// the worker count.

#include <benchmark/benchmark.h>

#include "hqsdp/experiment.hpp"
#include "hqsdp/instances.hpp"
#include "hqsdp/probability.hpp"
#include "hqsdp/rank_reduction.hpp"
#include "hqsdp/rounding.hpp"

using namespace hqsdp;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

SampleKernel case_a_kernel() {
  const auto inst = generate(GeneratorSpec::standard(GeneratorCase::A_OneIndef_RestPD, 10, 30, Sense::Minimize, 1));
  const auto lr = reduce_rank(solve(inst), inst, 1);
  SampleKernel k;
  for (const auto& a : inst.embedded_constraints()) k.A.push_back(lr.U.transpose() * a.dense() * lr.U);
  k.C = lr.U.transpose() * inst.embedded_objective().dense() * lr.U;
  k.level = default_gamma(inst.num_constraints(), Field::Real);
  return k;
}

void BM_EvaluateSamples(benchmark::State& state) {
  static const SampleKernel k = case_a_kernel();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_samples(k, 100'000, 7, mode(state)));
  state.SetItemsProcessed(state.iterations() * 100'000);
}

void BM_MonteCarloChiSq(benchmark::State& state) {
  const std::vector<double> w{1.0, -0.5, 0.25, 2.0, -1.0, 0.1};
  for (auto _ : state)
    benchmark::DoNotOptimize(asym_prob(AsymKind::ChiSq, w, Method::MonteCarlo, {1'000'000, 3, mode(state)}));
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}

void BM_BernoulliEnumerate(benchmark::State& state) {
  Rng rng(5);
  Matrix w = Matrix::Zero(18, 18);
  for (int i = 0; i < 18; ++i)
    for (int j = i + 1; j < 18; ++j) w(i, j) = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(bernoulli_enumerate(w, mode(state)));
  state.SetItemsProcessed(state.iterations() * (1 << 17));
}

void BM_Experiment(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.m_list = {5, 10};
  cfg.instances_per_m = 8;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
  state.SetItemsProcessed(state.iterations() * 16);
}

}  // namespace

BENCHMARK(BM_EvaluateSamples)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloChiSq)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BernoulliEnumerate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Experiment)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
