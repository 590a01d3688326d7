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

#ifndef LLAMEA_METRICS_H_
#define LLAMEA_METRICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llamea/bench_suite.h"

namespace llamea {

// Best-so-far precision of one run, padded to the run budget.
struct Trajectory {
  int fid = 0;
  int iid = 0;
  uint64_t seed = 0;
  std::vector<double> best_precision;
};

// Pads a (possibly short) best-so-far trace to `budget` entries by repeating
// its last value. Throws DomainError for an empty trace or one longer than
// the budget.
Trajectory PadTrajectory(int fid, int iid, uint64_t seed, PrecisionTrace trace,
                         int64_t budget);

struct AoccBounds {
  double lb = 1e-8;
  double ub = 1e2;
};

// Normalised area over the convergence curve of log10 precision, clipped to
// [lb, ub]. In [0, 1]; higher is better.
double Aocc(std::span<const double> best_precision, const AoccBounds& bounds = {});

struct CellKey {
  int fid = 0;
  int iid = 0;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

// Per (function, instance) AOCC scores; a cell may hold several seeds, which
// are averaged before cells are averaged.
using CellScores = std::map<CellKey, std::vector<double>>;

// Unweighted mean over all 24 x |instances| cells. Throws DomainError naming
// the first missing or empty cell.
double AggregateAocc(const CellScores& cells, std::span<const int> instances);

// Same mean restricted to the functions of one group.
double AggregateGroupAocc(const CellScores& cells, std::span<const int> instances,
                          FunctionGroup group);

struct QualityReport {
  double mean = 0.0;
  double std = 0.0;
  std::optional<std::array<double, kNumGroups>> group_mean;
  std::optional<std::array<double, kNumGroups>> group_std;
  std::optional<std::string> error;
};

// Mean and population standard deviation across k repetitions of the suite.
// With `detailed`, also the per-group means / deviations across repetitions.
QualityReport Quality(std::span<const CellScores> repetitions,
                      std::span<const int> instances, bool detailed);

double Mean(std::span<const double> values);
double PopulationStd(std::span<const double> values);

struct EafCurve {
  std::vector<int64_t> budgets;   // evaluation indices, 1-based, ascending
  std::vector<double> fraction;   // one per budget
  std::vector<double> targets;    // log-spaced on [lb, ub], ascending
};

inline constexpr int kDefaultEafTargets = 101;

// Fraction of (run, target) pairs attained by each evaluation budget. All
// trajectories must share one length.
EafCurve Eaf(std::span<const Trajectory> runs, const AoccBounds& bounds = {},
             int n_targets = kDefaultEafTargets);

// Area under the EAF step curve over [0, B], normalised by B.
double EafAuc(const EafCurve& curve);

// Log-spaced target grid with inclusive endpoints.
std::vector<double> LogTargets(const AoccBounds& bounds, int n_targets);

}  // namespace llamea

#endif  // LLAMEA_METRICS_H_
