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

#include "llamea/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "llamea/errors.h"

namespace llamea {

Trajectory PadTrajectory(int fid, int iid, uint64_t seed, PrecisionTrace trace,
                         int64_t budget) {
  if (trace.empty()) throw DomainError("cannot pad an empty trajectory");
  if (static_cast<int64_t>(trace.size()) > budget) {
    throw DomainError("trajectory longer than its budget");
  }
  trace.resize(static_cast<size_t>(budget), trace.back());
  return Trajectory{fid, iid, seed, std::move(trace)};
}

double Aocc(std::span<const double> best_precision, const AoccBounds& bounds) {
  if (best_precision.empty()) throw DomainError("empty trajectory");
  if (!(bounds.lb > 0.0 && bounds.lb < bounds.ub)) {
    throw DomainError("AOCC bounds must satisfy 0 < lb < ub");
  }
  const double log_lb = std::log10(bounds.lb);
  const double log_ub = std::log10(bounds.ub);
  const double range = log_ub - log_lb;
  double acc = 0.0;
  for (double y : best_precision) {
    // Clip before the log so zero precision maps to lb.
    const double clipped = std::clamp(y, bounds.lb, bounds.ub);
    acc += 1.0 - (std::log10(clipped) - log_lb) / range;
  }
  return acc / static_cast<double>(best_precision.size());
}

double Mean(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean of empty sequence");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double PopulationStd(std::span<const double> values) {
  const double mu = Mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

namespace {

double CellMean(const CellScores& cells, int fid, int iid) {
  const auto it = cells.find(CellKey{fid, iid});
  if (it == cells.end() || it->second.empty()) {
    throw DomainError("missing AOCC cell: f" + std::to_string(fid) +
                      " instance " + std::to_string(iid));
  }
  return Mean(it->second);
}

double AggregateOver(const CellScores& cells, std::span<const int> instances,
                     std::optional<FunctionGroup> group) {
  if (instances.empty()) throw DomainError("no instances configured");
  double acc = 0.0;
  int count = 0;
  for (int fid = 1; fid <= kNumFunctions; ++fid) {
    if (group && GroupOf(FunctionId(fid)) != *group) continue;
    for (int iid : instances) {
      acc += CellMean(cells, fid, iid);
      ++count;
    }
  }
  return acc / count;
}

}  // namespace

double AggregateAocc(const CellScores& cells, std::span<const int> instances) {
  return AggregateOver(cells, instances, std::nullopt);
}

double AggregateGroupAocc(const CellScores& cells, std::span<const int> instances,
                          FunctionGroup group) {
  return AggregateOver(cells, instances, group);
}

QualityReport Quality(std::span<const CellScores> repetitions,
                      std::span<const int> instances, bool detailed) {
  if (repetitions.empty()) throw DomainError("quality needs k >= 1 repetitions");
  std::vector<double> overall;
  for (const CellScores& rep : repetitions) {
    overall.push_back(AggregateAocc(rep, instances));
  }
  QualityReport report;
  report.mean = Mean(overall);
  report.std = PopulationStd(overall);
  if (detailed) {
    std::array<double, kNumGroups> means{};
    std::array<double, kNumGroups> stds{};
    for (int g = 0; g < kNumGroups; ++g) {
      std::vector<double> per_rep;
      for (const CellScores& rep : repetitions) {
        per_rep.push_back(
            AggregateGroupAocc(rep, instances, static_cast<FunctionGroup>(g)));
      }
      means[g] = Mean(per_rep);
      stds[g] = PopulationStd(per_rep);
    }
    report.group_mean = means;
    report.group_std = stds;
  }
  return report;
}

std::vector<double> LogTargets(const AoccBounds& bounds, int n_targets) {
  if (n_targets < 2) throw DomainError("EAF needs at least 2 targets");
  const double log_lb = std::log10(bounds.lb);
  const double log_ub = std::log10(bounds.ub);
  std::vector<double> targets(n_targets);
  for (int j = 0; j < n_targets; ++j) {
    const double e = log_lb + (log_ub - log_lb) * j / (n_targets - 1);
    targets[j] = std::pow(10.0, e);
  }
  targets.front() = bounds.lb;
  targets.back() = bounds.ub;
  return targets;
}

EafCurve Eaf(std::span<const Trajectory> runs, const AoccBounds& bounds,
             int n_targets) {
  if (runs.empty()) throw DomainError("EAF of an empty trajectory set");
  const size_t length = runs.front().best_precision.size();
  if (length == 0) throw DomainError("empty trajectory");
  for (const Trajectory& run : runs) {
    if (run.best_precision.size() != length) {
      throw DomainError("EAF trajectories must share one budget");
    }
  }
  EafCurve curve;
  curve.targets = LogTargets(bounds, n_targets);
  curve.budgets.resize(length);
  curve.fraction.assign(length, 0.0);

  // For a non-increasing trace, the number of attained targets at step b is
  // the count of targets >= y_b, itself non-decreasing in b.
  const double denom = static_cast<double>(runs.size()) * n_targets;
  std::vector<int64_t> attained(length, 0);
  for (const Trajectory& run : runs) {
    for (size_t b = 0; b < length; ++b) {
      const double y = run.best_precision[b];
      const auto first = std::lower_bound(curve.targets.begin(),
                                          curve.targets.end(), y);
      attained[b] += curve.targets.end() - first;
    }
  }
  for (size_t b = 0; b < length; ++b) {
    curve.budgets[b] = static_cast<int64_t>(b) + 1;
    curve.fraction[b] = static_cast<double>(attained[b]) / denom;
  }
  return curve;
}

double EafAuc(const EafCurve& curve) {
  if (curve.budgets.empty() || curve.budgets.size() != curve.fraction.size()) {
    throw DomainError("invalid EAF curve");
  }
  // fraction[k] holds on (budgets[k-1], budgets[k]].
  double area = 0.0;
  int64_t previous = 0;
  for (size_t k = 0; k < curve.budgets.size(); ++k) {
    area += curve.fraction[k] * static_cast<double>(curve.budgets[k] - previous);
    previous = curve.budgets[k];
  }
  return area / static_cast<double>(curve.budgets.back());
}

}  // namespace llamea
