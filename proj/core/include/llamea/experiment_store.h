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

#ifndef LLAMEA_EXPERIMENT_STORE_H_
#define LLAMEA_EXPERIMENT_STORE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llamea/candidate.h"
#include "llamea/evolution_loop.h"
#include "llamea/llm_gateway.h"
#include "llamea/metrics.h"
#include "llamea/run_analysis.h"

namespace llamea {

// ---------------------------------------------------------------------------
// Experiment configuration: one JSON document. Every field is optional and
// defaults to the values below; unknown fields are rejected.
//
//   {
//     "name": "session",
//     "loop":     {"iterations", "repetitions", "max_format_retries",
//                  "workers", "run_seed"},
//     "strategy": {"mode": "plus_one" | "comma_one", "detailed_feedback"},
//     "eval":     {"dim", "instances", "seeds", "budget", "master_seed",
//                  "timeout_s"},
//     "llm":      {"model", "temperature", "endpoint", "api_key_env",
//                  "max_attempts", "timeout_s"},
//     "gateway":  {"mode": "live" | "mock" | "replay", "mock_script",
//                  "mock_script_file", "recording"},
//     "executor": {"kind": "subprocess" | "native", "command"},
//     "prompt":   {"example_code", "example_code_file", "language",
//                  "budget_name"}
//   }
// ---------------------------------------------------------------------------

inline constexpr std::string_view kGatewayModes[] = {"live", "mock", "replay"};

struct GatewaySettings {
  std::string mode = "live";
  std::vector<std::string> mock_script;  // empty: generated demo script
  std::string recording;                 // replay source
  HttpGatewayConfig http;
};

struct ExecutorSettings {
  std::string kind = "subprocess";
  std::vector<std::string> command{"python3", "-m", "llamea_shim"};
};

struct ExperimentConfig {
  std::string name = "session";
  LoopConfig loop;
  GatewaySettings gateway;
  ExecutorSettings executor;
};

// Parses and validates a config document. File references are resolved
// against `base_dir` and inlined. Throws ConfigError("<field>: <problem>").
ExperimentConfig ParseConfig(std::string_view json_text,
                             const std::filesystem::path& base_dir = ".");
ExperimentConfig LoadConfig(const std::filesystem::path& path);
// Fully resolved, self-contained JSON (no credentials). ParseConfig of the
// result reproduces the config.
std::string SerializeConfig(const ExperimentConfig& config);

// Deterministic valid responses for mock sessions: `count` answers cycling
// through the native optimizers.
std::vector<std::string> DefaultMockScript(int count);

// ---------------------------------------------------------------------------
// Iteration log: iterations.jsonl, one record per line, keys in fixed order.
// ---------------------------------------------------------------------------

struct IterationRecord {
  int iteration = 0;
  std::string timestamp;  // ISO-8601 UTC
  std::string strategy;
  std::string prompt;
  Candidate candidate;
  TokenUsage usage;
  int generation_calls = 0;
  std::optional<double> diff_ratio;  // absent for the initial candidate
  std::optional<double> jaro;
  std::string best_id;
  double best_y = 0.0;
};

inline constexpr std::string_view kNormalizedTimestamp = "1970-01-01T00:00:00Z";

IterationRecord RecordFromEvent(const IterationEvent& event, std::string timestamp);
std::string SerializeRecord(const IterationRecord& record);  // without newline
IterationRecord ParseRecord(std::string_view line);          // throws ParseError
// Reads a log; a truncated final line (interrupted write) is ignored. Throws
// ParseError for malformed or non-contiguous records.
std::vector<IterationRecord> LoadRecords(const std::filesystem::path& path);
// Replaces every record's timestamp with kNormalizedTimestamp.
std::string NormalizeTimestamps(std::string_view jsonl);
// Loop state after the last record, for resuming.
LoopState StateFromRecords(std::span<const IterationRecord> records);

// One analytics row per generation step (t >= 1).
std::vector<AnalyticsRow> AnalyticsFromRecords(std::span<const IterationRecord> records);
void WriteAnalyticsCsv(const std::filesystem::path& path,
                       std::span<const AnalyticsRow> rows);

// ---------------------------------------------------------------------------
// Session manifest, written once before iteration 0.
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string created;
  std::string code_version;
  std::string gateway_mode;
  uint64_t run_seed = 0;
  uint64_t master_seed = 0;
  std::string suite_hash;
  std::string config_json;  // SerializeConfig snapshot
};

std::string SerializeManifest(const RunManifest& manifest);
RunManifest ParseManifest(std::string_view text);

// Library version string.
std::string_view CodeVersion();

// Fingerprint of the suite definition: function values of every function at
// fixed probe points on the given instances.
std::string SuiteHash(int dim, std::span<const int> instances, uint64_t master_seed);

// ---------------------------------------------------------------------------
// Trajectory CSV: "fid,iid,seed,evaluation_index,best_precision", one row per
// improvement point plus a final row at the budget; lossless for best-so-far
// traces and expanded on load.
// ---------------------------------------------------------------------------

std::string EncodeTrajectories(std::span<const Trajectory> runs);
std::vector<Trajectory> DecodeTrajectories(std::string_view csv);
void WriteTrajectoryCsv(const std::filesystem::path& path,
                        std::span<const Trajectory> runs);
std::vector<Trajectory> ReadTrajectoryCsv(const std::filesystem::path& path);

// Shortest decimal rendering that parses back to the same double.
std::string FormatDouble(double value);

// Whole-file helpers. ReadFile throws ConfigError when the file is missing.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);
void AppendLine(const std::filesystem::path& path, std::string_view line);

}  // namespace llamea

#endif  // LLAMEA_EXPERIMENT_STORE_H_
