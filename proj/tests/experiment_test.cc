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

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "llamea/errors.h"
#include "llamea/experiment_store.h"
#include "llamea/prompting.h"

namespace llamea {
namespace {

namespace fs = std::filesystem;

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("llamea_exp_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

fs::path WriteConfig(const fs::path& dir, const std::string& json_text) {
  fs::create_directories(dir);
  const fs::path p = dir / "config.json";
  WriteFile(p, json_text);
  return p;
}

constexpr const char* kMockConfig = R"js({
  "name": "mock",
  "loop": {"iterations": 3, "repetitions": 1, "run_seed": 5, "workers": 2},
  "eval": {"dim": 2, "instances": [1], "seeds": 1, "budget": 200, "master_seed": 3},
  "gateway": {"mode": "mock"},
  "executor": {"kind": "native"}
})js";

std::string FixedClock() { return "2026-01-02T03:04:05Z"; }

EvolveOptions MockOptions(const fs::path& config, const fs::path& out) {
  EvolveOptions o;
  o.config_path = config;
  o.out_dir = out;
  o.clock = FixedClock;
  return o;
}

TEST(Config, DefaultsMatchLoopDefaults) {
  const ExperimentConfig cfg = ParseConfig("{}");
  EXPECT_EQ(cfg.loop.iterations, 100);
  EXPECT_EQ(cfg.loop.repetitions, 5);
  EXPECT_EQ(cfg.loop.eval.budget, 10000);
  EXPECT_EQ(cfg.loop.eval.instances, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(cfg.loop.eval.seeds, 3);
  EXPECT_EQ(cfg.loop.eval.dim, 5);
  EXPECT_EQ(cfg.loop.eval.timeout.count(), 60000);
  EXPECT_EQ(cfg.loop.max_format_retries, 2);
  EXPECT_EQ(cfg.loop.strategy.mode, SelectionMode::kPlusOne);
  EXPECT_EQ(cfg.gateway.mode, "live");
  EXPECT_FALSE(cfg.loop.temperature);
}

TEST(Config, FieldLevelErrors) {
  auto message = [](const std::string& text) {
    try {
      ParseConfig(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message(R"js({"loop": {"iteratons": 3}})js"), "loop.iteratons: unknown field");
  EXPECT_EQ(message(R"js({"eval": {"budget": "many"}})js"), "eval.budget: must be an integer");
  EXPECT_EQ(message(R"js({"loop": {"iterations": 0}})js"), "loop.iterations must be >= 1");
  EXPECT_NE(message(R"js({"strategy": {"mode": "(1+1)"}})js").find("strategy.mode"),
            std::string::npos);
  EXPECT_NE(message(R"js({"gateway": {"mode": "cloud"}})js").find("gateway.mode"),
            std::string::npos);
  EXPECT_EQ(message(R"js({"eval": {"seed": -1}})js"), "eval.seed: unknown field");
  EXPECT_EQ(message(R"js({"eval": {"master_seed": -1}})js"),
            "eval.master_seed: must be a non-negative integer");
  EXPECT_EQ(message("[1, 2"), "config: not valid JSON");
  EXPECT_EQ(message(R"js({"loop": 3})js"), "loop: must be an object");
}

TEST(Config, SerializeRoundTrips) {
  const ExperimentConfig cfg = ParseConfig(R"js({
    "name": "x", "loop": {"iterations": 7, "run_seed": 18446744073709551615},
    "strategy": {"mode": "comma_one", "detailed_feedback": true},
    "eval": {"timeout_s": 2.5, "instances": [4]},
    "llm": {"temperature": 0.3, "model": "m"},
    "gateway": {"mode": "mock", "mock_script": ["a", "b"]},
    "prompt": {"example_code": "print(1)"}})js");
  const std::string text = SerializeConfig(cfg);
  const ExperimentConfig again = ParseConfig(text);
  EXPECT_EQ(SerializeConfig(again), text);
  EXPECT_EQ(again.loop.run_seed, 18446744073709551615ull);
  EXPECT_EQ(again.loop.strategy.mode, SelectionMode::kCommaOne);
  EXPECT_TRUE(again.loop.strategy.detailed_feedback);
  EXPECT_EQ(again.loop.eval.timeout.count(), 2500);
  EXPECT_EQ(again.gateway.mock_script.size(), 2u);
  EXPECT_EQ(again.loop.prompt.example_code, "print(1)");
}

TEST(Config, ResolvesFilesRelativeToConfig) {
  const fs::path dir = FreshDir("config_files");
  fs::create_directories(dir);
  WriteFile(dir / "script.json", R"js(["r1", "r2"])js");
  WriteFile(dir / "example.py", "class A:\n    pass\n");
  const fs::path cfg_path = WriteConfig(dir, R"js({
      "gateway": {"mock_script_file": "script.json"},
      "prompt": {"example_code_file": "example.py"}})js");
  const ExperimentConfig cfg = LoadConfig(cfg_path);
  EXPECT_EQ(cfg.gateway.mock_script, (std::vector<std::string>{"r1", "r2"}));
  EXPECT_EQ(cfg.loop.prompt.example_code, "class A:\n    pass\n");
  // The snapshot is self-contained.
  EXPECT_EQ(SerializeConfig(cfg).find("script.json"), std::string::npos);
}

TEST(Records, JsonlRoundTripsByteForByte) {
  IterationRecord r;
  r.iteration = 0;
  r.timestamp = "2026-01-01T00:00:00Z";
  r.strategy = "plus_one";
  r.prompt = "line1\n\"quoted\" \xC3\xA9";
  r.candidate = {.id = "a0", .name = "X", .code = "print(1)\n", .explanation = "",
                 .mean = 0.1 + 0.2, .std = 1e-17,
                 .group_mean = std::array<double, 5>{0.1, 0.2, 0.3, 0.4, 0.5},
                 .group_std = std::array<double, 5>{0, 0, 0, 0, 1.0 / 3.0},
                 .error = "boom"};
  r.usage = {12, 34};
  r.generation_calls = 2;
  r.best_id = "a0";
  r.best_y = 0.1 + 0.2;
  const std::string line = SerializeRecord(r);
  EXPECT_EQ(SerializeRecord(ParseRecord(line)), line);
  const IterationRecord back = ParseRecord(line);
  EXPECT_EQ(back.candidate.mean, 0.1 + 0.2);
  EXPECT_EQ(back.candidate.group_std->at(4), 1.0 / 3.0);
  EXPECT_EQ(back.candidate.error, "boom");
  EXPECT_FALSE(back.diff_ratio);
  // Key order is fixed.
  EXPECT_EQ(line.rfind("{\"iteration\":0,\"timestamp\":", 0), 0u);
}

TEST(Trajectories, CsvIsRunLengthEncodedAndLossless) {
  std::vector<Trajectory> runs = {
      {1, 1, 42, {5.0, 5.0, 3.0, 3.0, 3.0, 1e-9, 1e-9}},
      {1, 1, 43, {2.0, 2.0}},
      {2, 3, 18446744073709551615ull, {0.1 + 0.2}},
  };
  const std::string csv = EncodeTrajectories(runs);
  EXPECT_EQ(csv,
            "fid,iid,seed,evaluation_index,best_precision\n"
            "1,1,42,1,5\n1,1,42,3,3\n1,1,42,6,1e-09\n1,1,42,7,1e-09\n"
            "1,1,43,1,2\n1,1,43,2,2\n"
            "2,3,18446744073709551615,1,0.30000000000000004\n");
  const auto back = DecodeTrajectories(csv);
  ASSERT_EQ(back.size(), runs.size());
  for (size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(back[i].best_precision, runs[i].best_precision);
    EXPECT_EQ(back[i].seed, runs[i].seed);
  }
  EXPECT_THROW(DecodeTrajectories("bad,header\n"), ParseError);
}

TEST(Evolve, MockSessionWritesFourRecordsAndArtifacts) {
  const fs::path dir = FreshDir("mock_basic");
  const EvolveResult res = Evolve(MockOptions(WriteConfig(dir / "cfg", kMockConfig), dir / "s"));
  ASSERT_EQ(res.exit_code, kExitOk) << res.message;
  EXPECT_EQ(res.records, 4);
  const SessionPaths paths(dir / "s");
  for (const fs::path& p : {paths.manifest, paths.iterations, paths.recording, paths.analytics}) {
    EXPECT_TRUE(fs::exists(p)) << p;
  }
  EXPECT_EQ(LoadRecords(paths.iterations).size(), 4u);
  EXPECT_EQ(CountRecordedTurns(paths.recording), 4u);
  const RunManifest m = ParseManifest(ReadFile(paths.manifest));
  EXPECT_EQ(m.gateway_mode, "mock");
  EXPECT_EQ(m.run_seed, 5u);
  EXPECT_EQ(m.suite_hash, SuiteHash(2, std::vector<int>{1}, 3));
  EXPECT_EQ(ParseConfig(m.config_json).loop.iterations, 3);
  EXPECT_EQ(m.config_json.find("api_key\""), std::string::npos);
}

TEST(Evolve, RerunIsIdenticalAfterTimestampNormalization) {
  const fs::path dir = FreshDir("determinism");
  const fs::path cfg = WriteConfig(dir / "cfg", kMockConfig);
  EvolveOptions a = MockOptions(cfg, dir / "a");
  a.clock = UtcTimestamp;
  EvolveOptions b = MockOptions(cfg, dir / "b");
  b.workers = 7;
  ASSERT_EQ(Evolve(a).exit_code, kExitOk);
  ASSERT_EQ(Evolve(b).exit_code, kExitOk);
  const std::string ja = ReadFile(SessionPaths(dir / "a").iterations);
  const std::string jb = ReadFile(SessionPaths(dir / "b").iterations);
  EXPECT_EQ(NormalizeTimestamps(ja), NormalizeTimestamps(jb));
  EXPECT_EQ(ReadFile(SessionPaths(dir / "a").analytics),
            ReadFile(SessionPaths(dir / "b").analytics));
  // Load -> re-serialize reproduces the log.
  std::string again;
  for (const auto& r : LoadRecords(SessionPaths(dir / "b").iterations)) {
    again += SerializeRecord(r) + "\n";
  }
  EXPECT_EQ(again, jb);
}

TEST(Evolve, ReplayReproducesRecordedSession) {
  const fs::path dir = FreshDir("replay");
  const fs::path cfg = WriteConfig(dir / "cfg", kMockConfig);
  ASSERT_EQ(Evolve(MockOptions(cfg, dir / "rec")).exit_code, kExitOk);
  EvolveOptions replay = MockOptions(cfg, dir / "rep");
  replay.gateway_mode = "replay";
  replay.recording = SessionPaths(dir / "rec").recording;
  const EvolveResult res = Evolve(replay);
  ASSERT_EQ(res.exit_code, kExitOk) << res.message;
  EXPECT_EQ(ReadFile(SessionPaths(dir / "rec").iterations),
            ReadFile(SessionPaths(dir / "rep").iterations));
  EXPECT_EQ(ParseManifest(ReadFile(SessionPaths(dir / "rep").manifest)).gateway_mode, "replay");
}

TEST(Evolve, ConfigProblemsExitTwo) {
  const fs::path dir = FreshDir("bad_config");
  EvolveResult res =
      Evolve(MockOptions(WriteConfig(dir / "c1", R"js({"loop": {"iterations": -1}})js"), dir / "s1"));
  EXPECT_EQ(res.exit_code, kExitConfig);
  EXPECT_NE(res.message.find("loop.iterations"), std::string::npos);

  res = Evolve(MockOptions(WriteConfig(dir / "c2", R"js({"gateway": {"mode": "replay"}})js"),
                           dir / "s2"));
  EXPECT_EQ(res.exit_code, kExitConfig);
  EXPECT_NE(res.message.find("gateway.recording"), std::string::npos);

  ::unsetenv("LLAMEA_TEST_MISSING_KEY");
  res = Evolve(MockOptions(
      WriteConfig(dir / "c3", R"js({"llm": {"api_key_env": "LLAMEA_TEST_MISSING_KEY"}})js"),
      dir / "s3"));
  EXPECT_EQ(res.exit_code, kExitConfig);
  EXPECT_FALSE(fs::exists(dir / "s3"));

  const fs::path good = WriteConfig(dir / "c4", kMockConfig);
  ASSERT_EQ(Evolve(MockOptions(good, dir / "s4")).exit_code, kExitOk);
  res = Evolve(MockOptions(good, dir / "s4"));
  EXPECT_EQ(res.exit_code, kExitConfig);
  EXPECT_NE(res.message.find("--resume"), std::string::npos);
}

// Chat-completion stub that serves the default mock answers in order and can
// be told to fail.
class FlakyServer {
 public:
  FlakyServer() : script_(DefaultMockScript(16)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      if (failing_) {
        res.status = 503;
        return;
      }
      const auto body = nlohmann::json::parse(req.body);
      const size_t idx = HistoryLength(body["messages"][0]["content"]);
      nlohmann::json out = {
          {"choices", {{{"message", {{"role", "assistant"}, {"content", script_[idx]}}}}}},
          {"usage", {{"prompt_tokens", 1}, {"completion_tokens", 2}}}};
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FlakyServer() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }
  std::atomic<bool> failing_{false};

 private:
  // Number of history entries in a feedback prompt (0 for the task prompt);
  // it identifies the iteration, so a resumed session gets the same answers
  // as an uninterrupted one.
  static size_t HistoryLength(const std::string& prompt) {
    const std::string marker = "(name, score) is:\n";
    const size_t start = prompt.find(marker);
    if (start == std::string::npos) return 0;
    const size_t from = start + marker.size();
    const size_t end = prompt.find("\nThe selected solution", from);
    return static_cast<size_t>(std::count(prompt.begin() + from, prompt.begin() + end, '\n'));
  }

  httplib::Server server_;
  std::vector<std::string> script_;
  int port_ = 0;
  std::thread thread_;
};

TEST(Evolve, GatewayAbortExitsThreeAndResumeContinues) {
  FlakyServer server;
  ::setenv("LLAMEA_TEST_KEY", "sk-local", 1);
  const fs::path dir = FreshDir("resume");
  const std::string config = std::string(R"js({
    "name": "live", "loop": {"iterations": 3, "repetitions": 1},
    "eval": {"dim": 2, "instances": [1], "seeds": 1, "budget": 200},
    "llm": {"endpoint": ")js") + server.endpoint() + R"js(", "api_key_env": "LLAMEA_TEST_KEY",
            "max_attempts": 1},
    "executor": {"kind": "native"}})js";
  const fs::path cfg = WriteConfig(dir / "cfg", config);

  ASSERT_EQ(Evolve(MockOptions(cfg, dir / "full")).exit_code, kExitOk);

  // Abort after two iterations: the log is truncated to a 2-record checkpoint.
  ASSERT_EQ(Evolve(MockOptions(cfg, dir / "cut")).exit_code, kExitOk);
  const SessionPaths cut(dir / "cut");
  {
    auto records = LoadRecords(cut.iterations);
    std::string text;
    for (int i = 0; i < 2; ++i) text += SerializeRecord(records[i]) + "\n";
    text += "{\"iteration\":2,\"trunc";  // interrupted write
    WriteFile(cut.iterations, text);
  }
  server.failing_ = true;
  EvolveOptions resume;
  resume.resume = cut.dir;
  resume.clock = FixedClock;
  EvolveResult res = Evolve(resume);
  EXPECT_EQ(res.exit_code, kExitGatewayAbort);
  EXPECT_EQ(res.records, 2);
  EXPECT_NE(res.message.find("--resume"), std::string::npos);
  EXPECT_EQ(LoadRecords(cut.iterations).size(), 2u);

  server.failing_ = false;
  res = Evolve(resume);
  ASSERT_EQ(res.exit_code, kExitOk) << res.message;
  EXPECT_EQ(res.records, 4);
  EXPECT_EQ(ReadFile(cut.iterations), ReadFile(SessionPaths(dir / "full").iterations));
  EXPECT_EQ(CountRecordedTurns(cut.recording), 4u);
}

TEST(Benchmark, SummaryIsRecomputableFromTrajectoryCsv) {
  const fs::path dir = FreshDir("bench");
  BenchmarkOptions o;
  o.dims = {2};
  o.instances = 1;
  o.seeds = 2;
  o.budget = 120;
  o.master_seed = 9;
  o.out_dir = dir;
  const BenchmarkResult res = RunBenchmark(o);
  ASSERT_EQ(res.rows.size(), 3u);
  EXPECT_EQ(res.rows[0].optimizer, "erads");
  EXPECT_EQ(res.rows[0].runs, 48);
  EXPECT_TRUE(fs::exists(dir / "trajectories" / "erads_d2.csv"));
  const auto rows = LoadBenchmarkSummary(dir);
  ASSERT_EQ(rows.size(), 3u);
  for (const BenchmarkRow& r : rows) {
    const auto it = std::find_if(res.rows.begin(), res.rows.end(),
                                 [&](const BenchmarkRow& x) { return x.optimizer == r.optimizer; });
    ASSERT_NE(it, res.rows.end());
    EXPECT_EQ(r.aocc, it->aocc);
    EXPECT_EQ(r.eaf_auc, it->eaf_auc);
  }
  EXPECT_EQ(ReadFile(dir / "summary.csv"), FormatSummaryCsv(res.rows));
  EXPECT_NE(Report(dir).find("random_search"), std::string::npos);
}

TEST(Benchmark, DeterministicAndValidated) {
  BenchmarkOptions o;
  o.optimizers = {"de"};
  o.dims = {2};
  o.instances = 1;
  o.seeds = 1;
  o.budget = 100;
  o.workers = 1;
  const auto a = RunBenchmark(o);
  o.workers = 6;
  const auto b = RunBenchmark(o);
  EXPECT_EQ(a.rows[0].aocc, b.rows[0].aocc);
  EXPECT_EQ(a.runs.at({"de", 2})[5].best_precision, b.runs.at({"de", 2})[5].best_precision);
  o.optimizers = {"cma"};
  EXPECT_THROW(RunBenchmark(o), DomainError);
}

TEST(Analyze, SessionAndResults) {
  const fs::path dir = FreshDir("analyze");
  ASSERT_EQ(Evolve(MockOptions(WriteConfig(dir / "cfg", kMockConfig), dir / "s")).exit_code,
            kExitOk);
  Analyze(dir / "s");
  const std::string analytics = ReadFile(dir / "s" / "analytics.csv");
  EXPECT_EQ(std::count(analytics.begin(), analytics.end(), '\n'), 4);  // header + 3
  for (const IterationRecord& r : LoadRecords(dir / "s" / "iterations.jsonl")) {
    if (r.jaro) {
      EXPECT_GE(*r.jaro, 0.0);
      EXPECT_LE(*r.jaro, 1.0);
    }
  }
  EXPECT_TRUE(fs::exists(dir / "s" / "name_tokens.csv"));
  EXPECT_NE(Report(dir / "s").find("best:"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "s" / "convergence.csv"));

  BenchmarkOptions o;
  o.dims = {2};
  o.instances = 1;
  o.seeds = 1;
  o.budget = 80;
  o.out_dir = dir / "r";
  RunBenchmark(o);
  const auto files = Analyze(dir / "r");
  ASSERT_EQ(files.size(), 3u);
  for (const fs::path& f : files) {
    const std::string csv = ReadFile(f);
    double prev = -1.0;
    size_t pos = csv.find('\n') + 1;
    int rows = 0;
    while (pos < csv.size()) {
      const size_t comma = csv.find(',', pos);
      const size_t eol = csv.find('\n', pos);
      const double v = std::stod(csv.substr(comma + 1, eol - comma - 1));
      EXPECT_GE(v, prev);
      prev = v;
      pos = eol + 1;
      ++rows;
    }
    EXPECT_EQ(rows, 80);
  }
  EXPECT_THROW(Analyze(dir / "nothing"), ConfigError);
}

TEST(DefaultMockScript, ParsesAndCyclesOptimizers) {
  const auto script = DefaultMockScript(5);
  ASSERT_EQ(script.size(), 5u);
  EXPECT_NE(ParseResponse(script[1]).code.find("native-optimizer: de"), std::string::npos);
  EXPECT_EQ(ParseResponse(script[3]).name, "UniformRandomSearchV2");
}

}  // namespace
}  // namespace llamea
