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

#include "llamea/optimizers.h"

#include <algorithm>
#include <cassert>
#include <limits>
#include <string>

#include "llamea/errors.h"

namespace llamea {
namespace {

void CheckSameDim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("vector dimension mismatch");
}

using Population = std::vector<std::vector<double>>;

// Uniform initial population, evaluated in index order.
void InitPopulation(int n, BudgetedEvaluator& evaluator, Rng& rng,
                    Population& pop, std::vector<double>& fitness) {
  const int d = evaluator.instance().dim;
  pop.assign(n, std::vector<double>(d));
  fitness.resize(n);
  for (auto& row : pop) {
    for (double& v : row) v = rng.Uniform(kLowerBound, kUpperBound);
  }
  for (int i = 0; i < n; ++i) fitness[i] = evaluator.Spend(pop[i]);
}

int ArgMin(const std::vector<double>& v) {
  return static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

void EradsParams::Validate() const {
  if (pop_size < 4) throw DomainError("ERADS population size must be >= 4");
  if (cr < 0.0 || cr > 1.0) throw DomainError("CR must lie in [0, 1]");
  if (memory_factor < 0.0 || memory_factor > 1.0) {
    throw DomainError("memory factor must lie in [0, 1]");
  }
}

EradsParams EradsPreset(std::string_view name) {
  EradsParams p;
  if (name == "default") return p;
  if (name == "optimized-5d") {
    p.pop_size = 48;
    p.cr = 0.9893;
    p.f_init = 0.7469;
    p.f_final = 0.1636;
    p.memory_factor = 0.1043;
  } else if (name == "optimized-10d") {
    p.pop_size = 77;
    p.cr = 0.8511;
    p.f_init = 0.5500;
    p.f_final = 0.7587;
    p.memory_factor = 0.7501;
  } else if (name == "optimized-20d") {
    p.pop_size = 75;
    p.cr = 0.8556;
    p.f_init = 0.5605;
    p.f_final = 0.7317;
    p.memory_factor = 0.7534;
  } else {
    throw DomainError("unknown ERADS preset '" + std::string(name) + "'");
  }
  return p;
}

std::vector<std::string> EradsPresetNames() {
  return {"default", "optimized-5d", "optimized-10d", "optimized-20d"};
}

double FSchedule(int64_t t, int64_t budget, const EradsParams& params) {
  if (budget <= 0) throw DomainError("F schedule needs a positive budget");
  return params.f_init + (params.f_final - params.f_init) *
                             (static_cast<double>(t) / static_cast<double>(budget));
}

std::vector<double> EradsMutant(std::span<const double> x1,
                                std::span<const double> x2,
                                std::span<const double> x3,
                                std::span<const double> best,
                                std::span<const double> memory, double f,
                                double memory_factor) {
  CheckSameDim(x1, x2);
  CheckSameDim(x1, x3);
  CheckSameDim(x1, best);
  CheckSameDim(x1, memory);
  std::vector<double> v(x1.size());
  for (size_t j = 0; j < v.size(); ++j) {
    v[j] = x1[j] +
           f * (best[j] - x1[j] + x2[j] - x3[j] + memory_factor * memory[j]);
    v[j] = std::clamp(v[j], kLowerBound, kUpperBound);
  }
  return v;
}

std::vector<double> BinomialCrossover(std::span<const double> mutant,
                                      std::span<const double> target, double cr,
                                      Rng& rng) {
  CheckSameDim(mutant, target);
  const size_t forced = rng.Below(mutant.size());
  std::vector<double> trial(target.begin(), target.end());
  for (size_t j = 0; j < trial.size(); ++j) {
    if (rng.Uniform() < cr || j == forced) trial[j] = mutant[j];
  }
  return trial;
}

std::vector<double> EradsMemoryUpdate(std::span<const double> memory,
                                      double memory_factor, double f,
                                      std::span<const double> mutant,
                                      std::span<const double> current) {
  CheckSameDim(memory, mutant);
  CheckSameDim(memory, current);
  std::vector<double> m(memory.size());
  for (size_t j = 0; j < m.size(); ++j) {
    m[j] = (1.0 - memory_factor) * memory[j] +
           memory_factor * f * (mutant[j] - current[j]);
  }
  return m;
}

std::vector<int> DistinctIndices(int n, int exclude, int count, Rng& rng) {
  if (n - 1 < count) throw DomainError("not enough individuals to sample");
  std::vector<int> picked;
  picked.reserve(count);
  while (static_cast<int>(picked.size()) < count) {
    const int r = static_cast<int>(rng.Below(static_cast<uint64_t>(n)));
    if (r == exclude || std::find(picked.begin(), picked.end(), r) != picked.end()) {
      continue;
    }
    picked.push_back(r);
  }
  return picked;
}

OptimizerResult RunErads(const EradsParams& params, BudgetedEvaluator& evaluator,
                         uint64_t seed) {
  params.Validate();
  const int n = params.pop_size;
  const int64_t budget = evaluator.budget();
  if (evaluator.remaining() < n) {
    throw DomainError("budget smaller than the ERADS population");
  }
  const int d = evaluator.instance().dim;
  Rng rng(seed);

  Population pop;
  std::vector<double> fitness;
  InitPopulation(n, evaluator, rng, pop, fitness);
  int best_index = ArgMin(fitness);
  double f_opt = fitness[best_index];
  std::vector<double> x_opt = pop[best_index];
  std::vector<double> memory(d, 0.0);
  int64_t t = n;

  while (t < budget) {
    const double f_current = FSchedule(t, budget, params);
    for (int i = 0; i < n; ++i) {
      const std::vector<int> r = DistinctIndices(n, i, 3, rng);
      const std::vector<double> mutant =
          EradsMutant(pop[r[0]], pop[r[1]], pop[r[2]], pop[best_index], memory,
                      f_current, params.memory_factor);
      std::vector<double> trial = BinomialCrossover(mutant, pop[i], params.cr, rng);
      const double f_trial = evaluator.Spend(trial);
      ++t;
      if (f_trial < fitness[i]) {
        std::vector<double> original = std::move(pop[i]);
        pop[i] = std::move(trial);
        fitness[i] = f_trial;
        const bool global = f_trial < f_opt;
        if (global) {
          f_opt = f_trial;
          x_opt = pop[i];
          best_index = i;
        }
        if (global || params.memory_trigger == MemoryTrigger::kParentImprovement) {
          const std::vector<double>& reference =
              params.memory_reference == MemoryReference::kReplacedParent
                  ? pop[i]
                  : original;
          memory = EradsMemoryUpdate(memory, params.memory_factor, f_current,
                                     mutant, reference);
        }
      }
      if (t >= budget) break;
    }
    assert(fitness[best_index] == *std::min_element(fitness.begin(), fitness.end()));
  }
  return {std::move(x_opt), f_opt, evaluator.trace()};
}

OptimizerResult RunDe(BudgetedEvaluator& evaluator, uint64_t seed,
                      const DeParams& params) {
  const int n = params.pop_size;
  if (n < 4) throw DomainError("DE population size must be >= 4");
  if (evaluator.remaining() < n) {
    throw DomainError("budget smaller than the DE population");
  }
  const int d = evaluator.instance().dim;
  Rng rng(seed);

  Population pop;
  std::vector<double> fitness;
  InitPopulation(n, evaluator, rng, pop, fitness);
  int best_index = ArgMin(fitness);
  double best_f = fitness[best_index];
  std::vector<double> best_x = pop[best_index];

  Population next = pop;
  std::vector<double> next_fitness = fitness;
  std::vector<double> mutant(d);
  while (!evaluator.exhausted()) {
    for (int i = 0; i < n && !evaluator.exhausted(); ++i) {
      const std::vector<int> r = DistinctIndices(n, i, 3, rng);
      for (int j = 0; j < d; ++j) {
        mutant[j] = std::clamp(
            pop[r[0]][j] + params.f * (pop[r[1]][j] - pop[r[2]][j]),
            kLowerBound, kUpperBound);
      }
      std::vector<double> trial = BinomialCrossover(mutant, pop[i], params.cr, rng);
      const double f_trial = evaluator.Spend(trial);
      if (f_trial <= fitness[i]) {
        if (f_trial < best_f) {
          best_f = f_trial;
          best_x = trial;
        }
        next[i] = std::move(trial);
        next_fitness[i] = f_trial;
      }
    }
    pop = next;
    fitness = next_fitness;
  }
  return {std::move(best_x), best_f, evaluator.trace()};
}

OptimizerResult RunRandomSearch(BudgetedEvaluator& evaluator, uint64_t seed) {
  const int d = evaluator.instance().dim;
  Rng rng(seed);
  std::vector<double> x(d);
  OptimizerResult result;
  result.best_f = std::numeric_limits<double>::infinity();
  while (!evaluator.exhausted()) {
    for (double& v : x) v = rng.Uniform(kLowerBound, kUpperBound);
    const double f = evaluator.Spend(x);
    if (f < result.best_f) {
      result.best_f = f;
      result.best_x = x;
    }
  }
  result.trajectory = evaluator.trace();
  return result;
}

const std::vector<std::string>& NativeOptimizerIds() {
  static const std::vector<std::string> kIds = {"erads", "de", "random_search"};
  return kIds;
}

OptimizerResult RunNative(std::string_view optimizer_id,
                          BudgetedEvaluator& evaluator, uint64_t seed,
                          const EradsParams& erads) {
  if (optimizer_id == "erads") return RunErads(erads, evaluator, seed);
  if (optimizer_id == "de") return RunDe(evaluator, seed);
  if (optimizer_id == "random_search") return RunRandomSearch(evaluator, seed);
  throw DomainError("unknown optimizer id '" + std::string(optimizer_id) + "'");
}

}  // namespace llamea
