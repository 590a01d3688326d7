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

#ifndef LLAMEA_CANDIDATE_EXECUTOR_H_
#define LLAMEA_CANDIDATE_EXECUTOR_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llamea/bench_suite.h"
#include "llamea/metrics.h"
#include "llamea/optimizers.h"

namespace llamea {

// Captured error text is truncated to this many bytes (the tail is kept,
// which is where tracebacks name the exception).
inline constexpr size_t kErrorCap = 4096;

// One run of one candidate on one problem instance.
struct ExecutionSpec {
  std::string code;
  int dim = 5;
  int64_t budget = 10000;
  double lower = kLowerBound;
  double upper = kUpperBound;
  std::chrono::milliseconds timeout{60000};
  int fid = 1;
  int iid = 1;
  uint64_t seed = 0;         // run seed handed to the candidate
  uint64_t master_seed = 0;  // selects the instance transformation

  // Throws DomainError unless timeout > 0, budget >= 1 and dim >= 1.
  void Validate() const;
};

// Result of a run. A trajectory is present once at least one evaluation was
// answered; it is padded to the budget. Errors raised after some evaluations
// keep the partial (padded) trajectory; fatal errors before any evaluation
// carry none.
struct ExecutionOutcome {
  std::optional<Trajectory> trajectory;
  std::optional<std::string> error;
  std::optional<std::string> error_phase;  // "load" / "run" when reported
  int64_t evaluations = 0;                 // requests answered with a value
  std::chrono::milliseconds wall_time{0};
};

// Truncates `text` to at most `cap` bytes, keeping the tail on a UTF-8
// boundary and marking the cut with a leading "...".
std::string CapErrorText(std::string_view text, size_t cap = kErrorCap);

// Runs candidates. Implementations must be safe to call concurrently.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual ExecutionOutcome Execute(const ExecutionSpec& spec) = 0;
};

// Hosts a candidate in an external shim process speaking the newline-
// delimited JSON line protocol over stdin/stdout:
//   host -> shim  {"init":{"dim","budget","bounds","seed","code"}}
//   shim -> host  {"eval":{"x":[...]}}   answered by {"y":v} | {"exhausted":true}
//   shim -> host  {"done":{...}} | {"error":{"message",...,"phase"}}
// Objective values are computed on the host only; the budget is enforced
// here regardless of candidate behaviour.
class SubprocessExecutor : public Executor {
 public:
  // `command` is argv of the shim (argv[0] is looked up in PATH).
  explicit SubprocessExecutor(std::vector<std::string> command);
  ExecutionOutcome Execute(const ExecutionSpec& spec) override;

 private:
  std::vector<std::string> command_;
};

// Runs one of NativeOptimizerIds() in-process with the same outcome shape.
// Throws DomainError for an unknown id.
ExecutionOutcome NativeExecute(std::string_view optimizer_id,
                               const ExecutionSpec& spec,
                               const EradsParams& erads = {});

// Dispatches candidate code carrying a "# native-optimizer: <id>" directive
// line (optionally "# erads-preset: <name>") to NativeExecute. Code without
// a directive cannot run natively and yields an error outcome, as a
// non-executable candidate would. Used for offline and mock sessions.
class NativeExecutor : public Executor {
 public:
  ExecutionOutcome Execute(const ExecutionSpec& spec) override;
};

// Value of a "# <key>: <value>" directive line in `code`, if present.
std::optional<std::string> FindDirective(std::string_view code,
                                         std::string_view key);

}  // namespace llamea

#endif  // LLAMEA_CANDIDATE_EXECUTOR_H_
