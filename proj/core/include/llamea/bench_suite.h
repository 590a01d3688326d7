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

#ifndef LLAMEA_BENCH_SUITE_H_
#define LLAMEA_BENCH_SUITE_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace llamea {

inline constexpr int kNumFunctions = 24;
inline constexpr int kNumGroups = 5;
inline constexpr double kLowerBound = -5.0;
inline constexpr double kUpperBound = 5.0;

// One of the 24 noiseless benchmark functions. Construction validates the id.
class FunctionId {
 public:
  explicit FunctionId(int id);
  int value() const { return id_; }
  friend bool operator==(FunctionId, FunctionId) = default;
  friend auto operator<=>(FunctionId, FunctionId) = default;

 private:
  int id_;
};

enum class FunctionGroup {
  kSeparable = 0,
  kLowModerateConditioning = 1,
  kHighConditioningUnimodal = 2,
  kMultimodalStrongStructure = 3,
  kMultimodalWeakStructure = 4,
};

FunctionGroup GroupOf(FunctionId fid);
std::string_view GroupName(FunctionGroup group);
std::string_view FunctionName(FunctionId fid);

// Row-major square matrix.
struct SquareMatrix {
  int n = 0;
  std::vector<double> data;

  static SquareMatrix Identity(int n);
  double operator()(int r, int c) const { return data[r * n + c]; }
  double& operator()(int r, int c) { return data[r * n + c]; }
};

// Local optimum of the Gallagher peak functions, expressed in the rotated
// frame centred on the instance shift.
struct GaussianPeak {
  std::vector<double> center;
  std::vector<double> precision;  // diagonal of the peak's quadratic form
  double weight = 0.0;
};

// A transformed benchmark function. Immutable after MakeInstance and safe to
// share between threads.
struct ProblemInstance {
  FunctionId fid{1};
  int iid = 0;
  int dim = 0;
  uint64_t master_seed = 0;
  std::vector<double> shift;  // optimum location (except f5, see OptimumLocation)
  SquareMatrix rotation;
  std::vector<GaussianPeak> peaks;  // f21/f22 only
  double f_opt = 0.0;
};

// Deterministic in (fid, iid, dim, master_seed). iid 0 is the untransformed
// function: zero shift and identity rotation. f1-f5 are never rotated.
ProblemInstance MakeInstance(FunctionId fid, int iid, int dim,
                             uint64_t master_seed);

// Raw objective value. Throws DomainError on dimension mismatch or
// non-finite input.
double Evaluate(const ProblemInstance& instance, std::span<const double> x);

// Global minimiser. Equals the shift for every function except the linear
// slope, whose optimum sits on the box corner selected by the shift signs.
std::vector<double> OptimumLocation(const ProblemInstance& instance);

// Best-so-far precision per evaluation; non-increasing.
using PrecisionTrace = std::vector<double>;

// Single-owner budget-enforcing handle around an instance.
class BudgetedEvaluator {
 public:
  BudgetedEvaluator(ProblemInstance instance, int64_t budget);

  // Evaluates x, bills one evaluation and extends the best-so-far trace.
  // Throws BudgetExhausted when used() == budget().
  double Spend(std::span<const double> x);

  int64_t used() const { return used_; }
  int64_t budget() const { return budget_; }
  int64_t remaining() const { return budget_ - used_; }
  bool exhausted() const { return used_ >= budget_; }
  const ProblemInstance& instance() const { return instance_; }
  const PrecisionTrace& trace() const { return trace_; }
  PrecisionTrace TakeTrace() { return std::move(trace_); }

 private:
  ProblemInstance instance_;
  int64_t budget_;
  int64_t used_ = 0;
  PrecisionTrace trace_;
};

}  // namespace llamea

#endif  // LLAMEA_BENCH_SUITE_H_
