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

#ifndef LLAMEA_EXPERIMENT_H_
#define LLAMEA_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "llamea/candidate.h"
#include "llamea/experiment_store.h"
#include "llamea/metrics.h"

namespace llamea {

// Process exit codes shared by the commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGatewayAbort = 3;

// Current UTC time as ISO-8601 with second resolution.
std::string UtcTimestamp();

// A session directory holds manifest.json, iterations.jsonl,
// recording.jsonl and analytics.csv.
struct SessionPaths {
  explicit SessionPaths(std::filesystem::path dir);
  std::filesystem::path dir;
  std::filesystem::path manifest;
  std::filesystem::path iterations;
  std::filesystem::path recording;
  std::filesystem::path analytics;
};

struct EvolveOptions {
  std::filesystem::path config_path;            // new session
  std::optional<std::filesystem::path> resume;  // existing session dir
  std::filesystem::path out_dir;                // default: sessions/<name>
  std::optional<std::string> gateway_mode;      // overrides gateway.mode
  std::optional<std::filesystem::path> recording;  // replay source
  std::optional<int> workers;
  std::function<std::string()> clock = UtcTimestamp;
  std::ostream* log = nullptr;
  // Used instead of the configured executor when set (tests).
  Executor* executor = nullptr;
};

struct EvolveResult {
  int exit_code = kExitOk;
  std::string message;
  std::filesystem::path session_dir;
  std::optional<Candidate> best;
  int records = 0;
};

// Runs or resumes an evolution session. Never throws: failures map to exit
// codes (2 invalid config, 3 gateway abort with the checkpoint kept).
EvolveResult Evolve(const EvolveOptions& options);

struct BenchmarkOptions {
  std::vector<std::string> optimizers{"erads", "de", "random_search"};
  std::vector<int> dims{5};
  int instances = 3;  // instance ids 1..instances
  int seeds = 3;
  int64_t budget = 10000;
  uint64_t master_seed = 0;
  int workers = 0;  // 0: hardware concurrency
  std::string erads_preset = "default";
  std::filesystem::path out_dir;  // empty: nothing written
};

struct BenchmarkRow {
  std::string optimizer;
  int dim = 0;
  int runs = 0;
  double aocc = 0.0;     // mean over (function, instance) cells
  double eaf_auc = 0.0;  // over all runs pooled
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  // (optimizer, dim) -> runs in fid, iid, seed order.
  std::map<std::pair<std::string, int>, std::vector<Trajectory>> runs;
};

// Run seed of (function, instance, seed index); shared by all optimizers.
uint64_t BenchmarkSeed(uint64_t master_seed, int fid, int iid, int seed_index);

// Runs every optimizer over the full suite. Throws DomainError for unknown
// optimizer ids or presets. With out_dir, writes
// trajectories/<optimizer>_d<dim>.csv and summary.csv.
BenchmarkResult RunBenchmark(const BenchmarkOptions& options);

// Summary row recomputed from runs alone (instances taken from the runs).
BenchmarkRow SummarizeRuns(const std::string& optimizer, int dim,
                           const std::vector<Trajectory>& runs);

// Summary rows recomputed from a results directory's trajectory CSVs.
std::vector<BenchmarkRow> LoadBenchmarkSummary(const std::filesystem::path& results_dir);
std::string FormatSummaryCsv(const std::vector<BenchmarkRow>& rows);

// Writes derived outputs for a session directory (analytics.csv,
// name_tokens.csv) or a results directory (eaf/<optimizer>_d<dim>.csv).
// Returns the files written. Throws ConfigError when no logs are found.
std::vector<std::filesystem::path> Analyze(const std::filesystem::path& dir);

// Human-readable summary of a session or results directory. Session
// directories also get convergence.csv (iteration, y, best_y).
std::string Report(const std::filesystem::path& dir);

}  // namespace llamea

#endif  // LLAMEA_EXPERIMENT_H_
