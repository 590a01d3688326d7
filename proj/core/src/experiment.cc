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

#include "llamea/experiment.h"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <exception>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "llamea/candidate_executor.h"
#include "llamea/errors.h"
#include "llamea/evolution_loop.h"
#include "llamea/llm_gateway.h"
#include "llamea/optimizers.h"
#include "llamea/rng.h"
#include "llamea/run_analysis.h"

namespace llamea {
namespace {

namespace fs = std::filesystem;

// Appends each finished iteration to iterations.jsonl before the loop moves on.
class JsonlSink : public IterationSink {
 public:
  JsonlSink(fs::path path, const std::function<std::string()>& clock, std::ostream* log)
      : path_(std::move(path)), clock_(clock), log_(log) {}

  void OnIteration(const IterationEvent& e) override {
    AppendLine(path_, SerializeRecord(RecordFromEvent(e, clock_())));
    if (log_) {
      *log_ << "iteration " << e.iteration << ": " << e.candidate.name
            << " y=" << FormatScore(e.candidate.mean)
            << (e.candidate.error ? " (error)" : "") << " best=" << e.best.name << " "
            << FormatScore(e.best.mean) << "\n";
    }
  }

 private:
  fs::path path_;
  const std::function<std::string()>& clock_;
  std::ostream* log_;
};

bool SameFile(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

// Keeps the first `n` lines of a JSONL file.
void TruncateLines(const fs::path& path, size_t n) {
  if (!fs::exists(path)) return;
  const std::string text = ReadFile(path);
  size_t pos = 0;
  for (size_t i = 0; i < n; ++i) {
    const size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      pos = text.size();
      break;
    }
    pos = eol + 1;
  }
  if (pos < text.size()) WriteFile(path, std::string_view(text).substr(0, pos));
}

size_t RecordedTurns(const std::vector<IterationRecord>& records) {
  size_t turns = 0;
  for (const IterationRecord& r : records) turns += static_cast<size_t>(r.generation_calls);
  return turns;
}

template <typename Fn>
void ParallelFor(size_t n, int workers, Fn&& fn) {
  int count = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  count = static_cast<int>(std::clamp<size_t>(static_cast<size_t>(std::max(count, 1)), 1,
                                              std::max<size_t>(n, 1)));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string TrajectoryFileStem(const std::string& optimizer, int dim) {
  return optimizer + "_d" + std::to_string(dim);
}

// Splits "<optimizer>_d<dim>" back into its parts.
std::optional<std::pair<std::string, int>> ParseStem(const std::string& stem) {
  const size_t at = stem.rfind("_d");
  if (at == std::string::npos || at == 0 || at + 2 >= stem.size()) return std::nullopt;
  try {
    size_t used = 0;
    const int dim = std::stoi(stem.substr(at + 2), &used);
    if (used != stem.size() - at - 2) return std::nullopt;
    return std::make_pair(stem.substr(0, at), dim);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<fs::path> TrajectoryFiles(const fs::path& results_dir) {
  std::vector<fs::path> files;
  const fs::path dir = results_dir / "trajectories";
  if (!fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv" && ParseStem(entry.path().stem().string())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SessionPaths::SessionPaths(fs::path d)
    : dir(std::move(d)),
      manifest(dir / "manifest.json"),
      iterations(dir / "iterations.jsonl"),
      recording(dir / "recording.jsonl"),
      analytics(dir / "analytics.csv") {}

EvolveResult Evolve(const EvolveOptions& o) {
  EvolveResult res;
  std::vector<IterationRecord> records;
  try {
    ExperimentConfig cfg;
    std::optional<SessionPaths> paths;
    if (o.resume) {
      paths.emplace(*o.resume);
      if (!fs::exists(paths->manifest)) {
        throw ConfigError("--resume: no manifest.json in " + paths->dir.string());
      }
      const RunManifest manifest = ParseManifest(ReadFile(paths->manifest));
      cfg = ParseConfig(manifest.config_json);
      if (o.gateway_mode && *o.gateway_mode != cfg.gateway.mode) {
        throw ConfigError("--gateway: session was started in '" + cfg.gateway.mode +
                          "' mode");
      }
      if (fs::exists(paths->iterations)) {
        records = LoadRecords(paths->iterations);
        // Drop a partially written trailing line, if any.
        std::string clean;
        for (const IterationRecord& r : records) clean += SerializeRecord(r) + "\n";
        WriteFile(paths->iterations, clean);
      }
    } else {
      if (o.config_path.empty()) throw ConfigError("--config: required for a new session");
      cfg = LoadConfig(o.config_path);
      if (o.gateway_mode) {
        if (std::find(std::begin(kGatewayModes), std::end(kGatewayModes), *o.gateway_mode) ==
            std::end(kGatewayModes)) {
          throw ConfigError("--gateway: must be one of {live, mock, replay}");
        }
        cfg.gateway.mode = *o.gateway_mode;
      }
      if (o.recording) cfg.gateway.recording = fs::absolute(*o.recording).string();
      paths.emplace(o.out_dir.empty() ? fs::path("sessions") / cfg.name : o.out_dir);
      if (fs::exists(paths->manifest)) {
        throw ConfigError("--out: " + paths->dir.string() +
                          " already holds a session; use --resume");
      }
    }
    if (o.workers) {
      if (*o.workers < 0) throw ConfigError("--workers: must be >= 0");
      cfg.loop.workers = *o.workers;
    }
    res.session_dir = paths->dir;
    const int total = cfg.loop.iterations + 1;

    // Gateway: constructed before anything is written so a missing
    // credential leaves no half-created session behind.
    const size_t turns = RecordedTurns(records);
    std::unique_ptr<Gateway> base;
    bool record = true;
    if (cfg.gateway.mode == "live") {
      base = std::make_unique<HttpGateway>(cfg.gateway.http);
    } else if (cfg.gateway.mode == "mock") {
      auto mock = std::make_unique<ScriptedGateway>(
          cfg.gateway.mock_script.empty() ? DefaultMockScript(total)
                                          : cfg.gateway.mock_script);
      mock->Advance(turns);
      base = std::move(mock);
    } else {
      if (cfg.gateway.recording.empty()) {
        throw ConfigError("gateway.recording: required in replay mode (or pass --recording)");
      }
      auto replay = std::make_unique<ReplayGateway>(cfg.gateway.recording);
      replay->Advance(turns);
      record = !SameFile(cfg.gateway.recording, paths->recording);
      base = std::move(replay);
    }

    std::unique_ptr<Executor> owned_executor;
    Executor* executor = o.executor;
    if (!executor) {
      if (cfg.executor.kind == "native") {
        owned_executor = std::make_unique<NativeExecutor>();
      } else {
        owned_executor = std::make_unique<SubprocessExecutor>(cfg.executor.command);
      }
      executor = owned_executor.get();
    }

    fs::create_directories(paths->dir);
    if (!o.resume) {
      RunManifest manifest;
      manifest.created = o.clock();
      manifest.code_version = std::string(CodeVersion());
      manifest.gateway_mode = cfg.gateway.mode;
      manifest.run_seed = cfg.loop.run_seed;
      manifest.master_seed = cfg.loop.eval.master_seed;
      manifest.suite_hash =
          SuiteHash(cfg.loop.eval.dim, cfg.loop.eval.instances, cfg.loop.eval.master_seed);
      manifest.config_json = SerializeConfig(cfg);
      WriteFile(paths->manifest, SerializeManifest(manifest));
      WriteFile(paths->iterations, "");
      if (record) WriteFile(paths->recording, "");
    } else if (record) {
      // Calls of an iteration that never completed are redone.
      TruncateLines(paths->recording, turns);
    }

    std::unique_ptr<RecordingGateway> recorder;
    Gateway* gateway = base.get();
    if (record) {
      recorder = std::make_unique<RecordingGateway>(*base, paths->recording);
      gateway = recorder.get();
    }

    if (static_cast<int>(records.size()) < total) {
      std::optional<LoopState> state;
      if (!records.empty()) state = StateFromRecords(records);
      if (o.log && state) {
        *o.log << "resuming at iteration " << state->next_iteration << "\n";
      }
      JsonlSink sink(paths->iterations, o.clock, o.log);
      try {
        RunLlamea(cfg.loop, *gateway, *executor, &sink, std::move(state));
      } catch (const GatewayError& e) {
        records = LoadRecords(paths->iterations);
        res.records = static_cast<int>(records.size());
        res.exit_code = kExitGatewayAbort;
        res.message = std::string("gateway failure at iteration ") +
                      std::to_string(records.size()) + ": " + e.what() +
                      "; checkpoint kept, continue with --resume " + paths->dir.string();
        if (!records.empty()) res.best = StateFromRecords(records).history.best;
        return res;
      }
    }
    records = LoadRecords(paths->iterations);
    WriteAnalyticsCsv(paths->analytics, AnalyticsFromRecords(records));
    res.records = static_cast<int>(records.size());
    res.best = StateFromRecords(records).history.best;
    res.message = "session complete: " + paths->dir.string();
    return res;
  } catch (const ConfigError& e) {
    res.exit_code = kExitConfig;
    res.message = e.what();
  } catch (const GatewayError& e) {
    res.exit_code = kExitGatewayAbort;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = kExitFailure;
    res.message = e.what();
  }
  return res;
}

uint64_t BenchmarkSeed(uint64_t master_seed, int fid, int iid, int seed_index) {
  return DeriveSeed({master_seed, static_cast<uint64_t>(fid), static_cast<uint64_t>(iid),
                     static_cast<uint64_t>(seed_index)});
}

BenchmarkRow SummarizeRuns(const std::string& optimizer, int dim,
                           const std::vector<Trajectory>& runs) {
  if (runs.empty()) throw DomainError("no runs to summarize for " + optimizer);
  CellScores cells;
  std::set<int> iids;
  for (const Trajectory& t : runs) {
    cells[{t.fid, t.iid}].push_back(Aocc(t.best_precision));
    iids.insert(t.iid);
  }
  const std::vector<int> instances(iids.begin(), iids.end());
  BenchmarkRow row;
  row.optimizer = optimizer;
  row.dim = dim;
  row.runs = static_cast<int>(runs.size());
  row.aocc = AggregateAocc(cells, instances);
  row.eaf_auc = EafAuc(Eaf(runs));
  return row;
}

BenchmarkResult RunBenchmark(const BenchmarkOptions& o) {
  const auto& ids = NativeOptimizerIds();
  for (const std::string& opt : o.optimizers) {
    if (std::find(ids.begin(), ids.end(), opt) == ids.end()) {
      throw DomainError("unknown optimizer id '" + opt + "'");
    }
  }
  if (o.optimizers.empty()) throw DomainError("no optimizers given");
  if (o.dims.empty()) throw DomainError("no dimensions given");
  if (o.instances < 1 || o.seeds < 1 || o.budget < 1) {
    throw DomainError("instances, seeds and budget must be >= 1");
  }
  const EradsParams erads = EradsPreset(o.erads_preset);

  struct Task {
    size_t group;
    size_t slot;
    ExecutionSpec spec;
  };
  std::vector<std::pair<std::string, int>> groups;
  std::vector<Task> tasks;
  for (int dim : o.dims) {
    for (const std::string& opt : o.optimizers) {
      size_t slot = 0;
      for (int fid = 1; fid <= kNumFunctions; ++fid) {
        for (int iid = 1; iid <= o.instances; ++iid) {
          for (int s = 0; s < o.seeds; ++s) {
            ExecutionSpec spec;
            spec.dim = dim;
            spec.budget = o.budget;
            spec.fid = fid;
            spec.iid = iid;
            spec.seed = BenchmarkSeed(o.master_seed, fid, iid, s);
            spec.master_seed = o.master_seed;
            tasks.push_back({groups.size(), slot++, spec});
          }
        }
      }
      groups.emplace_back(opt, dim);
    }
  }
  const size_t per_group = static_cast<size_t>(kNumFunctions) * o.instances * o.seeds;
  std::vector<std::vector<Trajectory>> runs(groups.size(),
                                            std::vector<Trajectory>(per_group));
  ParallelFor(tasks.size(), o.workers, [&](size_t i) {
    const Task& task = tasks[i];
    const std::string& opt = groups[task.group].first;
    ExecutionOutcome out = NativeExecute(opt, task.spec, erads);
    if (out.error || !out.trajectory) {
      throw std::runtime_error(opt + " failed on f" + std::to_string(task.spec.fid) +
                               ": " + out.error.value_or("no trajectory"));
    }
    runs[task.group][task.slot] = std::move(*out.trajectory);
  });

  BenchmarkResult result;
  for (size_t g = 0; g < groups.size(); ++g) {
    result.rows.push_back(SummarizeRuns(groups[g].first, groups[g].second, runs[g]));
    result.runs[groups[g]] = std::move(runs[g]);
  }
  if (!o.out_dir.empty()) {
    for (const auto& [key, group_runs] : result.runs) {
      WriteTrajectoryCsv(o.out_dir / "trajectories" /
                             (TrajectoryFileStem(key.first, key.second) + ".csv"),
                         group_runs);
    }
    WriteFile(o.out_dir / "summary.csv", FormatSummaryCsv(result.rows));
  }
  return result;
}

std::string FormatSummaryCsv(const std::vector<BenchmarkRow>& rows) {
  std::string out = "optimizer,dim,runs,aocc,eaf_auc\n";
  for (const BenchmarkRow& r : rows) {
    out += r.optimizer + "," + std::to_string(r.dim) + "," + std::to_string(r.runs) + "," +
           FormatDouble(r.aocc) + "," + FormatDouble(r.eaf_auc) + "\n";
  }
  return out;
}

std::vector<BenchmarkRow> LoadBenchmarkSummary(const fs::path& results_dir) {
  std::vector<BenchmarkRow> rows;
  for (const fs::path& file : TrajectoryFiles(results_dir)) {
    const auto key = *ParseStem(file.stem().string());
    rows.push_back(SummarizeRuns(key.first, key.second, ReadTrajectoryCsv(file)));
  }
  if (rows.empty()) {
    throw ConfigError("no trajectory CSVs under " + (results_dir / "trajectories").string());
  }
  return rows;
}

std::vector<fs::path> Analyze(const fs::path& dir) {
  std::vector<fs::path> written;
  const SessionPaths session(dir);
  if (fs::exists(session.iterations)) {
    const std::vector<IterationRecord> records = LoadRecords(session.iterations);
    WriteAnalyticsCsv(session.analytics, AnalyticsFromRecords(records));
    written.push_back(session.analytics);
    std::vector<std::string> names;
    for (const IterationRecord& r : records) names.push_back(r.candidate.name);
    std::vector<std::pair<std::string, int>> tokens;
    for (const auto& kv : NameTokens(names)) tokens.push_back(kv);
    std::stable_sort(tokens.begin(), tokens.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string csv = "token,count\n";
    for (const auto& [token, count] : tokens) csv += token + "," + std::to_string(count) + "\n";
    const fs::path tokens_path = dir / "name_tokens.csv";
    WriteFile(tokens_path, csv);
    written.push_back(tokens_path);
    return written;
  }
  const std::vector<fs::path> files = TrajectoryFiles(dir);
  if (files.empty()) {
    throw ConfigError("no iterations.jsonl or trajectories/*.csv in " + dir.string());
  }
  for (const fs::path& file : files) {
    const EafCurve curve = Eaf(ReadTrajectoryCsv(file));
    std::string csv = "evaluations,fraction\n";
    for (size_t i = 0; i < curve.budgets.size(); ++i) {
      csv += std::to_string(curve.budgets[i]) + "," + FormatDouble(curve.fraction[i]) + "\n";
    }
    const fs::path out = dir / "eaf" / (file.stem().string() + ".csv");
    WriteFile(out, csv);
    written.push_back(out);
  }
  return written;
}

std::string Report(const fs::path& dir) {
  std::ostringstream out;
  const SessionPaths session(dir);
  if (fs::exists(session.iterations)) {
    const std::vector<IterationRecord> records = LoadRecords(session.iterations);
    if (records.empty()) throw ConfigError("session " + dir.string() + " has no iterations");
    std::string csv = "iteration,y,best_y\n";
    for (const IterationRecord& r : records) {
      csv += std::to_string(r.iteration) + "," + FormatDouble(r.candidate.mean) + "," +
             FormatDouble(r.best_y) + "\n";
    }
    WriteFile(dir / "convergence.csv", csv);
    const LoopState state = StateFromRecords(records);
    int errors = 0;
    for (const IterationRecord& r : records) errors += r.candidate.error.has_value();
    out << "session " << dir.string() << "\n"
        << "iterations: " << records.size() << " (" << errors << " with errors)\n"
        << "strategy: " << records.front().strategy << "\n"
        << "best: " << state.history.best->name << " (" << state.history.best->id
        << ") y=" << FormatScore(state.history.best->mean)
        << " sigma=" << FormatScore(state.history.best->std) << "\n";
    return out.str();
  }
  const std::vector<BenchmarkRow> rows = LoadBenchmarkSummary(dir);
  out << "optimizer            dim   runs    AOCC  EAF-AUC\n";
  for (const BenchmarkRow& r : rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-20s %3d %6d  %6.4f   %6.4f\n", r.optimizer.c_str(),
                  r.dim, r.runs, r.aocc, r.eaf_auc);
    out << line;
  }
  return out.str();
}

}  // namespace llamea
