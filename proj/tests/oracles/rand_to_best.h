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

#ifndef LLAMEA_TESTS_ORACLES_RAND_TO_BEST_H_
#define LLAMEA_TESTS_ORACLES_RAND_TO_BEST_H_

// Stand-alone DE/rand-to-best/1/bin with greedy in-place replacement and a
// fixed F. Written without the optimizers module; shares only the random
// stream contract (Uniform init, rejection-sampled donors via Below(n),
// forced crossover index via Below(d) then one Uniform per component).

#include <algorithm>
#include <cstdint>
#include <vector>

#include "llamea/bench_suite.h"
#include "llamea/rng.h"

namespace llamea::oracle {

inline std::vector<double> RandToBestTrace(const ProblemInstance& inst,
                                           int64_t budget, uint64_t seed,
                                           int pop_size, double f, double cr) {
  const int d = inst.dim;
  Rng rng(seed);
  std::vector<std::vector<double>> x(pop_size, std::vector<double>(d));
  for (auto& row : x) {
    for (auto& v : row) v = rng.Uniform(-5.0, 5.0);
  }
  std::vector<double> fit(pop_size);
  std::vector<double> trace;
  auto record = [&](double value) {
    trace.push_back(trace.empty() ? value : std::min(trace.back(), value));
  };
  for (int i = 0; i < pop_size; ++i) {
    fit[i] = Evaluate(inst, x[i]);
    record(fit[i]);
  }
  int best = 0;
  for (int i = 1; i < pop_size; ++i) {
    if (fit[i] < fit[best]) best = i;
  }
  int64_t used = pop_size;
  while (used < budget) {
    for (int i = 0; i < pop_size && used < budget; ++i) {
      int r[3];
      int got = 0;
      while (got < 3) {
        const int c = static_cast<int>(rng.Below(pop_size));
        bool dup = c == i;
        for (int k = 0; k < got; ++k) dup = dup || r[k] == c;
        if (!dup) r[got++] = c;
      }
      std::vector<double> v(d);
      for (int j = 0; j < d; ++j) {
        v[j] = x[r[0]][j] + f * (x[best][j] - x[r[0]][j] + x[r[1]][j] - x[r[2]][j]);
        v[j] = std::min(5.0, std::max(-5.0, v[j]));
      }
      const uint64_t jr = rng.Below(d);
      std::vector<double> u = x[i];
      for (int j = 0; j < d; ++j) {
        const double draw = rng.Uniform();
        if (draw < cr || static_cast<uint64_t>(j) == jr) u[j] = v[j];
      }
      const double fu = Evaluate(inst, u);
      ++used;
      record(fu);
      if (fu < fit[i]) {
        x[i] = u;
        if (fu < fit[best]) best = i;
        fit[i] = fu;
      }
    }
  }
  return trace;
}

}  // namespace llamea::oracle

#endif  // LLAMEA_TESTS_ORACLES_RAND_TO_BEST_H_
