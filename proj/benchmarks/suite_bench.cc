// Copyright 2026 The LLaMEA-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "llamea/bench_suite.h"
#include "llamea/metrics.h"
#include "llamea/optimizers.h"
#include "llamea/rng.h"
#include "llamea/run_analysis.h"

namespace llamea {
namespace {

void BM_Evaluate(benchmark::State& state) {
  const int fid = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const ProblemInstance inst = MakeInstance(FunctionId(fid), 1, dim, 42);
  Rng rng(1);
  std::vector<double> x(dim);
  for (double& v : x) v = rng.Uniform(-5.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Evaluate(inst, x));
  }
}
BENCHMARK(BM_Evaluate)
    ->ArgsProduct({{1, 8, 16, 21, 23, 24}, {5, 20}});

void BM_Aocc(benchmark::State& state) {
  std::vector<double> y(static_cast<size_t>(state.range(0)));
  double v = 1e3;
  for (double& e : y) e = (v *= 0.999);
  for (auto _ : state) benchmark::DoNotOptimize(Aocc(y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Aocc)->Arg(10000);

void BM_RunOptimizer(benchmark::State& state) {
  const std::string id = NativeOptimizerIds()[state.range(0)];
  const ProblemInstance inst = MakeInstance(FunctionId(10), 1, 5, 42);
  for (auto _ : state) {
    BudgetedEvaluator ev(inst, 10000);
    benchmark::DoNotOptimize(RunNative(id, ev, 1).best_f);
  }
  state.SetLabel(id);
}
BENCHMARK(BM_RunOptimizer)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Jaro(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(Jaro("AdaptiveHybridDEPSOWithDynamicRestart",
                                  "AdaptiveHybridCMAESDE"));
  }
}
BENCHMARK(BM_Jaro);

}  // namespace
}  // namespace llamea

BENCHMARK_MAIN();
