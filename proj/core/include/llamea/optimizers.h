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

#ifndef LLAMEA_OPTIMIZERS_H_
#define LLAMEA_OPTIMIZERS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llamea/bench_suite.h"
#include "llamea/rng.h"

namespace llamea {

// When the mutation memory is refreshed.
enum class MemoryTrigger {
  kParentImprovement,  // trial beats the individual it replaces
  kGlobalImprovement,  // trial beats the best-so-far
};

// Which vector is subtracted from the mutant in the memory update.
enum class MemoryReference {
  kReplacedParent,  // P[i] after replacement, i.e. the trial
  kOriginalParent,  // P[i] before replacement
};

struct EradsParams {
  int pop_size = 50;
  double cr = 0.95;
  double f_init = 0.55;
  double f_final = 0.85;
  double memory_factor = 0.3;
  MemoryTrigger memory_trigger = MemoryTrigger::kParentImprovement;
  MemoryReference memory_reference = MemoryReference::kReplacedParent;

  // Throws DomainError when pop_size < 4 or a rate leaves [0, 1].
  void Validate() const;
};

// Hyper-parameter presets: "default", "optimized-5d", "optimized-10d",
// "optimized-20d". Throws DomainError for other names.
EradsParams EradsPreset(std::string_view name);
std::vector<std::string> EradsPresetNames();

struct OptimizerResult {
  std::vector<double> best_x;
  double best_f = 0.0;
  PrecisionTrace trajectory;
};

// Linear F schedule from f_init (t = 0) to f_final (t = budget).
double FSchedule(int64_t t, int64_t budget, const EradsParams& params);

// x1 + F (best - x1 + x2 - x3 + mf * memory), clipped to the search box.
std::vector<double> EradsMutant(std::span<const double> x1,
                                std::span<const double> x2,
                                std::span<const double> x3,
                                std::span<const double> best,
                                std::span<const double> memory, double f,
                                double memory_factor);

// Binomial crossover with one forced mutant component. Draw order: the forced
// index first (Below(d)), then one Uniform() per component in order.
std::vector<double> BinomialCrossover(std::span<const double> mutant,
                                      std::span<const double> target, double cr,
                                      Rng& rng);

// (1 - mf) memory + mf F (mutant - current).
std::vector<double> EradsMemoryUpdate(std::span<const double> memory,
                                      double memory_factor, double f,
                                      std::span<const double> mutant,
                                      std::span<const double> current);

// Draws `count` distinct indices from [0, n) \ {exclude} by rejection with
// Rng::Below(n).
std::vector<int> DistinctIndices(int n, int exclude, int count, Rng& rng);

OptimizerResult RunErads(const EradsParams& params, BudgetedEvaluator& evaluator,
                         uint64_t seed);

struct DeParams {
  int pop_size = 50;
  double f = 0.5;
  double cr = 0.9;
};

// Classical synchronous DE/rand/1/bin.
OptimizerResult RunDe(BudgetedEvaluator& evaluator, uint64_t seed,
                      const DeParams& params = {});

OptimizerResult RunRandomSearch(BudgetedEvaluator& evaluator, uint64_t seed);

// Native optimizer ids accepted by RunNative: "erads", "de", "random_search".
const std::vector<std::string>& NativeOptimizerIds();
OptimizerResult RunNative(std::string_view optimizer_id,
                          BudgetedEvaluator& evaluator, uint64_t seed,
                          const EradsParams& erads = {});

}  // namespace llamea

#endif  // LLAMEA_OPTIMIZERS_H_
