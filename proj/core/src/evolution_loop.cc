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

#include "llamea/evolution_loop.h"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "llamea/errors.h"
#include "llamea/rng.h"

namespace llamea {
namespace {

int WorkerCount(const LoopConfig& cfg, size_t tasks) {
  int n = cfg.workers > 0 ? cfg.workers
                          : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<size_t>(static_cast<size_t>(n), tasks));
}

QualityReport ErrorReport(const std::string& error, bool detailed) {
  QualityReport r;
  r.error = error;
  if (detailed) {
    r.group_mean.emplace();
    r.group_std.emplace();
    r.group_mean->fill(0.0);
    r.group_std->fill(0.0);
  }
  return r;
}

void ApplyReport(Candidate& c, const QualityReport& r) {
  c.mean = r.mean;
  c.std = r.std;
  c.group_mean = r.group_mean;
  c.group_std = r.group_std;
  c.error = r.error;
}

void AddUsage(TokenUsage& total, const TokenUsage& u) {
  total.prompt_tokens += u.prompt_tokens;
  total.completion_tokens += u.completion_tokens;
}

}  // namespace

std::string StrategyName(const Strategy& strategy) {
  std::string name = strategy.mode == SelectionMode::kPlusOne ? "plus_one" : "comma_one";
  if (strategy.detailed_feedback) name += "+detailed";
  return name;
}

SelectionMode ParseSelectionMode(std::string_view text) {
  if (text == "plus_one") return SelectionMode::kPlusOne;
  if (text == "comma_one") return SelectionMode::kCommaOne;
  throw ConfigError("strategy.mode must be \"plus_one\" or \"comma_one\", got \"" +
                    std::string(text) + "\"");
}

void LoopConfig::Validate() const {
  if (iterations < 1) throw ConfigError("loop.iterations must be >= 1");
  if (repetitions < 1) throw ConfigError("loop.repetitions must be >= 1");
  if (max_format_retries < 0) throw ConfigError("loop.max_format_retries must be >= 0");
  if (workers < 0) throw ConfigError("loop.workers must be >= 0");
  if (model.empty()) throw ConfigError("llm.model must not be empty");
  if (eval.dim < 1) throw ConfigError("eval.dim must be >= 1");
  if (eval.instances.empty()) throw ConfigError("eval.instances must not be empty");
  for (int iid : eval.instances) {
    if (iid < 0) throw ConfigError("eval.instances must be >= 0");
  }
  if (eval.seeds < 1) throw ConfigError("eval.seeds must be >= 1");
  if (eval.budget < 1) throw ConfigError("eval.budget must be >= 1");
  if (eval.timeout.count() <= 0) throw ConfigError("eval.timeout must be positive");
}

std::vector<RunTask> RunTasks(const LoopConfig& cfg) {
  std::vector<RunTask> tasks;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    for (int fid = 1; fid <= kNumFunctions; ++fid) {
      for (int iid : cfg.eval.instances) {
        for (int s = 0; s < cfg.eval.seeds; ++s) {
          const uint64_t seed = DeriveSeed(
              {cfg.run_seed, static_cast<uint64_t>(rep), static_cast<uint64_t>(fid),
               static_cast<uint64_t>(iid), static_cast<uint64_t>(s)});
          tasks.push_back({rep, fid, iid, s, seed});
        }
      }
    }
  }
  return tasks;
}

const Candidate& SelectParent(const SessionHistory& history,
                              const std::optional<Candidate>& last,
                              const Strategy& strategy) {
  if (!history.best || !last) {
    throw DomainError("no evaluated candidate to select a parent from");
  }
  return strategy.mode == SelectionMode::kPlusOne ? *history.best : *last;
}

QualityReport ScoreCandidate(const std::string& code, const LoopConfig& cfg,
                             Executor& executor) {
  const bool detailed = cfg.strategy.detailed_feedback;
  if (code.empty()) return ErrorReport("candidate code is empty", detailed);
  const std::vector<RunTask> tasks = RunTasks(cfg);
  std::vector<std::optional<double>> scores(tasks.size());
  std::vector<std::optional<std::string>> errors(tasks.size());
  std::atomic<size_t> next{0};
  // Lowest failing task index; tasks are claimed in order, so every task
  // below it has run and the reported error is independent of scheduling.
  std::atomic<size_t> first_error{std::numeric_limits<size_t>::max()};

  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size() || i > first_error.load()) return;
      const RunTask& task = tasks[i];
      ExecutionSpec spec;
      spec.code = code;
      spec.dim = cfg.eval.dim;
      spec.budget = cfg.eval.budget;
      spec.timeout = cfg.eval.timeout;
      spec.fid = task.fid;
      spec.iid = task.iid;
      spec.seed = task.seed;
      spec.master_seed = cfg.eval.master_seed;
      try {
        ExecutionOutcome out = executor.Execute(spec);
        if (out.error) {
          errors[i] = std::move(out.error);
        } else if (!out.trajectory) {
          errors[i] = "run produced no trajectory";
        } else {
          scores[i] = Aocc(out.trajectory->best_precision);
        }
      } catch (const std::exception& e) {
        errors[i] = CapErrorText(e.what());
      }
      if (errors[i]) {
        size_t cur = first_error.load();
        while (i < cur && !first_error.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  const int n_workers = WorkerCount(cfg, tasks.size());
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  if (first_error.load() < tasks.size()) {
    return ErrorReport(*errors[first_error.load()], detailed);
  }
  std::vector<CellScores> reps(static_cast<size_t>(cfg.repetitions));
  for (size_t i = 0; i < tasks.size(); ++i) {
    reps[tasks[i].repetition][{tasks[i].fid, tasks[i].iid}].push_back(*scores[i]);
  }
  return Quality(reps, cfg.eval.instances, detailed);
}

bool UpdateBest(SessionHistory& history, const Candidate& candidate) {
  if (history.best && candidate.mean < history.best->mean) return false;
  history.best = candidate;
  return true;
}

std::string CandidateId(int iteration) { return "a" + std::to_string(iteration); }

LoopResult RunLlamea(const LoopConfig& cfg, Gateway& gateway, Executor& executor,
                     IterationSink* sink, std::optional<LoopState> resume) {
  cfg.Validate();
  const TaskPrompt task = BuildTaskPrompt(cfg.prompt);
  LoopState state = resume ? std::move(*resume) : LoopState{};
  if (state.next_iteration > 0 && (!state.history.best || !state.last)) {
    throw DomainError("resume state lacks the evaluated candidates");
  }

  for (int t = state.next_iteration; t <= cfg.iterations; ++t) {
    IterationEvent event;
    event.iteration = t;
    event.strategy = cfg.strategy;
    if (t == 0) {
      event.prompt = task.text;
    } else {
      event.parent = SelectParent(state.history, state.last, cfg.strategy);
      event.prompt = BuildFeedbackPrompt(task, state.history, *event.parent,
                                         cfg.strategy.detailed_feedback)
                         .text;
    }

    ChatRequest req{cfg.model, {{"user", event.prompt}}, cfg.temperature, std::nullopt};
    Candidate cand;
    cand.id = CandidateId(t);
    cand.iteration = t;
    if (event.parent) cand.parent_id = event.parent->id;
    std::optional<ParsedResponse> parsed;
    std::string parse_error;
    std::string last_content;
    for (int attempt = 0; attempt <= cfg.max_format_retries && !parsed; ++attempt) {
      if (attempt > 0) {
        req.messages.push_back({"assistant", last_content});
        req.messages.push_back({"user", FormatReminder()});
      }
      const ChatResponse resp = gateway.Complete(req);
      ++event.generation_calls;
      AddUsage(event.usage, resp.usage);
      last_content = resp.content;
      try {
        parsed = ParseResponse(resp.content);
      } catch (const ParseError& e) {
        parse_error = e.what();
      }
    }

    if (parsed) {
      cand.name = parsed->name;
      cand.code = parsed->code;
      cand.explanation = parsed->explanation;
      ApplyReport(cand, ScoreCandidate(cand.code, cfg, executor));
    } else {
      cand.name = "UnparsableResponse";
      cand.explanation = last_content;
      ApplyReport(cand, ErrorReport("response did not follow the required format: " +
                                        parse_error,
                                    cfg.strategy.detailed_feedback));
    }

    state.history.entries.push_back({cand.name, cand.mean});
    event.best_replaced = UpdateBest(state.history, cand);
    state.last = cand;
    state.next_iteration = t + 1;
    event.candidate = std::move(cand);
    event.best = *state.history.best;
    if (sink) sink->OnIteration(event);
  }
  return {*state.history.best, std::move(state)};
}

}  // namespace llamea
