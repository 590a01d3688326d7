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

#ifndef LLAMEA_EVOLUTION_LOOP_H_
#define LLAMEA_EVOLUTION_LOOP_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llamea/candidate.h"
#include "llamea/candidate_executor.h"
#include "llamea/llm_gateway.h"
#include "llamea/metrics.h"
#include "llamea/prompting.h"

namespace llamea {

enum class SelectionMode {
  kPlusOne,   // mutate the best-so-far
  kCommaOne,  // mutate the most recent candidate
};

struct Strategy {
  SelectionMode mode = SelectionMode::kPlusOne;
  bool detailed_feedback = false;  // per-group scores instead of mean/std
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

// "plus_one" / "comma_one", with a "+detailed" suffix for detailed feedback.
std::string StrategyName(const Strategy& strategy);
// Inverse of the mode part of StrategyName. Throws ConfigError.
SelectionMode ParseSelectionMode(std::string_view text);

// How each candidate is scored: every function of the suite, on each
// instance, with `seeds` runs per instance, repeated `repetitions` times.
struct EvalConfig {
  int dim = 5;
  std::vector<int> instances{1, 2, 3};
  int seeds = 3;
  int64_t budget = 10000;
  uint64_t master_seed = 0;  // instance transformations
  std::chrono::milliseconds timeout{60000};
};

struct LoopConfig {
  int iterations = 100;   // T: mutations after the initial candidate
  int repetitions = 5;    // k: independent repetitions of the suite
  EvalConfig eval;
  Strategy strategy;
  std::string model = "gpt-4-turbo";
  std::optional<double> temperature;  // unset: gateway default
  int max_format_retries = 2;
  int workers = 0;         // 0: hardware concurrency
  uint64_t run_seed = 0;   // root of all per-run seeds
  TaskPromptParams prompt;

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

// The 24 x instances x seeds runs of one repetition, in a fixed order.
struct RunTask {
  int repetition = 0;
  int fid = 0;
  int iid = 0;
  int seed_index = 0;
  uint64_t seed = 0;
};
std::vector<RunTask> RunTasks(const LoopConfig& cfg);

// PlusOne: the best-so-far; CommaOne: the latest candidate. Throws
// DomainError when nothing has been evaluated yet.
const Candidate& SelectParent(const SessionHistory& history,
                              const std::optional<Candidate>& last,
                              const Strategy& strategy);

// Runs the candidate over the full suite k times on a worker pool and
// aggregates. Never throws for execution failures: the first failing run (in
// task order) sets mean = std = 0 and carries its error text.
QualityReport ScoreCandidate(const std::string& code, const LoopConfig& cfg,
                             Executor& executor);

// Replaces history.best iff there is none or new.mean >= best.mean.
// Returns whether it was replaced.
bool UpdateBest(SessionHistory& history, const Candidate& candidate);

// Everything known about one completed iteration.
struct IterationEvent {
  int iteration = 0;
  Strategy strategy;
  std::string prompt;                // first user message of the iteration
  Candidate candidate;
  std::optional<Candidate> parent;   // absent for the initial candidate
  TokenUsage usage;                  // summed over all calls of the iteration
  int generation_calls = 0;          // 1 + format re-prompts
  bool best_replaced = false;
  Candidate best;                    // best-so-far after this iteration
};

class IterationSink {
 public:
  virtual ~IterationSink() = default;
  // Called once per iteration, after scoring; a throw aborts the loop.
  virtual void OnIteration(const IterationEvent& event) = 0;
};

// Loop state sufficient to continue a session.
struct LoopState {
  SessionHistory history;
  std::optional<Candidate> last;
  int next_iteration = 0;
};

struct LoopResult {
  Candidate best;
  LoopState state;
};

// Candidate id of iteration t.
std::string CandidateId(int iteration);

// Initial generation then `iterations` mutation steps. Each iteration is
// handed to `sink` before the next begins. GatewayError propagates; all
// previously reported iterations remain valid for resuming via `resume`.
LoopResult RunLlamea(const LoopConfig& cfg, Gateway& gateway, Executor& executor,
                     IterationSink* sink = nullptr,
                     std::optional<LoopState> resume = std::nullopt);

}  // namespace llamea

#endif  // LLAMEA_EVOLUTION_LOOP_H_
