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

#include "llamea/experiment_store.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "llamea/bench_suite.h"
#include "llamea/errors.h"
#include "llamea/hash.h"
#include "llamea/optimizers.h"
#include "llamea/prompting.h"

#ifndef LLAMEA_VERSION_STRING
#define LLAMEA_VERSION_STRING "unknown"
#endif

namespace llamea {
namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kManifestFormat = "llamea-session/1";
constexpr std::string_view kTrajectoryHeader =
    "fid,iid,seed,evaluation_index,best_precision";

// Typed, path-aware access to one JSON object of the config. Every key read
// is remembered so Finish() can reject the rest as unknown.
class Fields {
 public:
  Fields(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ && !obj_->is_object()) Fail(path_, "must be an object");
  }

  Fields Object(const std::string& key) {
    const json* v = Take(key);
    return Fields(v, Path(key));
  }

  void Int(const std::string& key, int& out) {
    int64_t wide = out;
    Int64(key, wide);
    if (wide < INT32_MIN || wide > INT32_MAX) Fail(Path(key), "is out of range");
    out = static_cast<int>(wide);
  }
  void Int64(const std::string& key, int64_t& out) {
    if (const json* v = Take(key)) {
      if (!v->is_number_integer()) Fail(Path(key), "must be an integer");
      if (v->is_number_unsigned() && v->get<uint64_t>() > INT64_MAX) {
        Fail(Path(key), "is out of range");
      }
      out = v->get<int64_t>();
    }
  }
  void Uint64(const std::string& key, uint64_t& out) {
    if (const json* v = Take(key)) {
      if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<int64_t>() < 0)) {
        Fail(Path(key), "must be a non-negative integer");
      }
      out = v->get<uint64_t>();
    }
  }
  void Double(const std::string& key, double& out) {
    if (const json* v = Take(key)) {
      if (!v->is_number()) Fail(Path(key), "must be a number");
      out = v->get<double>();
    }
  }
  void OptionalDouble(const std::string& key, std::optional<double>& out) {
    if (const json* v = Take(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      if (!v->is_number()) Fail(Path(key), "must be a number or null");
      out = v->get<double>();
    }
  }
  void Bool(const std::string& key, bool& out) {
    if (const json* v = Take(key)) {
      if (!v->is_boolean()) Fail(Path(key), "must be true or false");
      out = v->get<bool>();
    }
  }
  void String(const std::string& key, std::string& out) {
    if (const json* v = Take(key)) {
      if (!v->is_string()) Fail(Path(key), "must be a string");
      out = v->get<std::string>();
    }
  }
  void IntArray(const std::string& key, std::vector<int>& out) {
    if (const json* v = Take(key)) {
      if (!v->is_array()) Fail(Path(key), "must be an array of integers");
      std::vector<int> values;
      for (const json& e : *v) {
        if (!e.is_number_integer()) Fail(Path(key), "must be an array of integers");
        values.push_back(e.get<int>());
      }
      out = std::move(values);
    }
  }
  void StringArray(const std::string& key, std::vector<std::string>& out) {
    if (const json* v = Take(key)) {
      if (!v->is_array()) Fail(Path(key), "must be an array of strings");
      std::vector<std::string> values;
      for (const json& e : *v) {
        if (!e.is_string()) Fail(Path(key), "must be an array of strings");
        values.push_back(e.get<std::string>());
      }
      out = std::move(values);
    }
  }

  void Finish() const {
    if (!obj_) return;
    for (const auto& [key, value] : obj_->items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        Fail(Path(key), "unknown field");
      }
    }
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[noreturn]] static void Fail(const std::string& field, const std::string& problem) {
    throw ConfigError((field.empty() ? "config" : field) + ": " + problem);
  }

 private:
  const json* Take(const std::string& key) {
    seen_.push_back(key);
    if (!obj_ || !obj_->contains(key)) return nullptr;
    return &(*obj_)[key];
  }

  const json* obj_;
  std::string path_;
  std::vector<std::string> seen_;
};

void RequireOneOf(const std::string& field, const std::string& value,
                  std::initializer_list<std::string_view> allowed) {
  for (std::string_view a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (std::string_view a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  Fields::Fail(field, "must be one of {" + list + "}, got \"" + value + "\"");
}

json OptionalJson(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json OptionalJson(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::string> OptionalString(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}
std::optional<double> OptionalNumber(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string Lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

}  // namespace

// --------------------------------------------------------------- config ----

ExperimentConfig ParseConfig(std::string_view json_text,
                             const std::filesystem::path& base_dir) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config: not valid JSON");
  ExperimentConfig cfg;
  LoopConfig& loop = cfg.loop;
  Fields root(&doc, "");
  root.String("name", cfg.name);
  {
    Fields f = root.Object("loop");
    f.Int("iterations", loop.iterations);
    f.Int("repetitions", loop.repetitions);
    f.Int("max_format_retries", loop.max_format_retries);
    f.Int("workers", loop.workers);
    f.Uint64("run_seed", loop.run_seed);
    f.Finish();
  }
  {
    Fields f = root.Object("strategy");
    std::string mode = StrategyName({loop.strategy.mode, false});
    f.String("mode", mode);
    RequireOneOf(f.Path("mode"), mode, {"plus_one", "comma_one"});
    loop.strategy.mode = ParseSelectionMode(mode);
    f.Bool("detailed_feedback", loop.strategy.detailed_feedback);
    f.Finish();
  }
  {
    Fields f = root.Object("eval");
    f.Int("dim", loop.eval.dim);
    f.IntArray("instances", loop.eval.instances);
    f.Int("seeds", loop.eval.seeds);
    f.Int64("budget", loop.eval.budget);
    f.Uint64("master_seed", loop.eval.master_seed);
    double timeout_s = static_cast<double>(loop.eval.timeout.count()) / 1000.0;
    f.Double("timeout_s", timeout_s);
    if (!(timeout_s > 0.0)) Fields::Fail(f.Path("timeout_s"), "must be positive");
    loop.eval.timeout = std::chrono::milliseconds(static_cast<int64_t>(timeout_s * 1000.0));
    f.Finish();
  }
  HttpGatewayConfig& http = cfg.gateway.http;
  {
    Fields f = root.Object("llm");
    f.String("model", loop.model);
    f.OptionalDouble("temperature", loop.temperature);
    f.String("endpoint", http.endpoint);
    f.String("api_key_env", http.api_key_env);
    f.Int("max_attempts", http.retry.max_attempts);
    if (http.retry.max_attempts < 1) Fields::Fail(f.Path("max_attempts"), "must be >= 1");
    int64_t timeout_s = http.timeout.count();
    f.Int64("timeout_s", timeout_s);
    if (timeout_s < 1) Fields::Fail(f.Path("timeout_s"), "must be >= 1");
    http.timeout = std::chrono::seconds(timeout_s);
    f.Finish();
  }
  {
    Fields f = root.Object("gateway");
    f.String("mode", cfg.gateway.mode);
    RequireOneOf(f.Path("mode"), cfg.gateway.mode, {"live", "mock", "replay"});
    f.StringArray("mock_script", cfg.gateway.mock_script);
    std::string script_file;
    f.String("mock_script_file", script_file);
    if (!script_file.empty()) {
      if (!cfg.gateway.mock_script.empty()) {
        Fields::Fail(f.Path("mock_script_file"), "conflicts with gateway.mock_script");
      }
      const json script = json::parse(ReadFile(base_dir / script_file), nullptr, false);
      if (!script.is_array()) {
        Fields::Fail(f.Path("mock_script_file"), "must name a JSON array of strings");
      }
      for (const json& e : script) {
        if (!e.is_string()) {
          Fields::Fail(f.Path("mock_script_file"), "must name a JSON array of strings");
        }
        cfg.gateway.mock_script.push_back(e.get<std::string>());
      }
    }
    f.String("recording", cfg.gateway.recording);
    if (!cfg.gateway.recording.empty()) {
      cfg.gateway.recording = (base_dir / cfg.gateway.recording).lexically_normal().string();
    }
    f.Finish();
  }
  {
    Fields f = root.Object("executor");
    f.String("kind", cfg.executor.kind);
    RequireOneOf(f.Path("kind"), cfg.executor.kind, {"subprocess", "native"});
    f.StringArray("command", cfg.executor.command);
    if (cfg.executor.command.empty()) Fields::Fail(f.Path("command"), "must not be empty");
    f.Finish();
  }
  {
    Fields f = root.Object("prompt");
    TaskPromptParams& p = loop.prompt;
    f.String("example_code", p.example_code);
    std::string code_file;
    f.String("example_code_file", code_file);
    if (!code_file.empty()) {
      if (!p.example_code.empty()) {
        Fields::Fail(f.Path("example_code_file"), "conflicts with prompt.example_code");
      }
      p.example_code = ReadFile(base_dir / code_file);
    }
    f.String("language", p.language);
    f.String("budget_name", p.budget_name);
    f.Finish();
  }
  root.Finish();
  loop.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfig(ReadFile(path), path.parent_path().empty() ? "." : path.parent_path());
}

std::string SerializeConfig(const ExperimentConfig& cfg) {
  const LoopConfig& loop = cfg.loop;
  const HttpGatewayConfig& http = cfg.gateway.http;
  json doc = {
      {"name", cfg.name},
      {"loop",
       {{"iterations", loop.iterations},
        {"repetitions", loop.repetitions},
        {"max_format_retries", loop.max_format_retries},
        {"workers", loop.workers},
        {"run_seed", loop.run_seed}}},
      {"strategy",
       {{"mode", StrategyName({loop.strategy.mode, false})},
        {"detailed_feedback", loop.strategy.detailed_feedback}}},
      {"eval",
       {{"dim", loop.eval.dim},
        {"instances", loop.eval.instances},
        {"seeds", loop.eval.seeds},
        {"budget", loop.eval.budget},
        {"master_seed", loop.eval.master_seed},
        {"timeout_s", static_cast<double>(loop.eval.timeout.count()) / 1000.0}}},
      {"llm",
       {{"model", loop.model},
        {"temperature", OptionalJson(loop.temperature)},
        {"endpoint", http.endpoint},
        {"api_key_env", http.api_key_env},
        {"max_attempts", http.retry.max_attempts},
        {"timeout_s", http.timeout.count()}}},
      {"gateway",
       {{"mode", cfg.gateway.mode},
        {"mock_script", cfg.gateway.mock_script},
        {"recording", cfg.gateway.recording}}},
      {"executor", {{"kind", cfg.executor.kind}, {"command", cfg.executor.command}}},
      {"prompt",
       {{"example_code", loop.prompt.example_code},
        {"language", loop.prompt.language},
        {"budget_name", loop.prompt.budget_name}}},
  };
  return doc.dump(2);
}

std::vector<std::string> DefaultMockScript(int count) {
  struct Variant {
    const char* name;
    const char* id;
    const char* note;
  };
  static constexpr Variant kVariants[] = {
      {"UniformRandomSearch", "random_search", "Samples the box uniformly."},
      {"ClassicDifferentialEvolution", "de", "DE/rand/1/bin with fixed F and CR."},
      {"EnhancedRandomAdaptiveDESearch", "erads",
       "Rand-to-best DE with a memory term and a linear F schedule."},
  };
  std::vector<std::string> script;
  for (int i = 0; i < count; ++i) {
    const Variant& v = kVariants[i % 3];
    const std::string name =
        std::string(v.name) + (i < 3 ? "" : "V" + std::to_string(i / 3 + 1));
    const std::string code = Lines({
        "import numpy as np",
        "",
        "# native-optimizer: " + std::string(v.id),
        "class " + name + ":",
        "    \"\"\"" + std::string(v.note) + "\"\"\"",
        "    def __init__(self, budget=10000, dim=10):",
        "        self.budget = budget",
        "        self.dim = dim",
        "        self.variant = " + std::to_string(i),
        "",
        "    def __call__(self, func):",
        "        raise NotImplementedError('runs natively on the host')",
    });
    script.push_back(std::string(v.note) + "\n" + RenderResponse(name, code));
  }
  return script;
}

// ----------------------------------------------------------- iterations ----

IterationRecord RecordFromEvent(const IterationEvent& event, std::string timestamp) {
  IterationRecord r;
  r.iteration = event.iteration;
  r.timestamp = std::move(timestamp);
  r.strategy = StrategyName(event.strategy);
  r.prompt = event.prompt;
  r.candidate = event.candidate;
  r.usage = event.usage;
  r.generation_calls = event.generation_calls;
  if (event.parent) {
    r.diff_ratio = DiffRatio(event.parent->code, event.candidate.code);
    r.jaro = Jaro(event.parent->name, event.candidate.name);
  }
  r.best_id = event.best.id;
  r.best_y = event.best.mean;
  return r;
}

std::string SerializeRecord(const IterationRecord& r) {
  const Candidate& c = r.candidate;
  json per_group = nullptr;
  if (c.group_mean && c.group_std) {
    per_group = {{"mean", *c.group_mean}, {"std", *c.group_std}};
  }
  const json doc = {
      {"iteration", r.iteration},
      {"timestamp", r.timestamp},
      {"strategy", r.strategy},
      {"candidate",
       {{"id", c.id},
        {"name", c.name},
        {"code", c.code},
        {"explanation", c.explanation},
        {"y", c.mean},
        {"sigma", c.std},
        {"error", OptionalJson(c.error)}}},
      {"parent_id", OptionalJson(c.parent_id)},
      {"per_group", per_group},
      {"usage",
       {{"prompt_tokens", r.usage.prompt_tokens},
        {"completion_tokens", r.usage.completion_tokens},
        {"calls", r.generation_calls}}},
      {"diff_ratio", OptionalJson(r.diff_ratio)},
      {"jaro", OptionalJson(r.jaro)},
      {"best", {{"id", r.best_id}, {"y", r.best_y}}},
      {"prompt", r.prompt},
  };
  return doc.dump();
}

IterationRecord ParseRecord(std::string_view line) {
  try {
    const json j = json::parse(line);
    IterationRecord r;
    r.iteration = j.at("iteration").get<int>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.strategy = j.at("strategy").get<std::string>();
    const json& c = j.at("candidate");
    r.candidate.id = c.at("id").get<std::string>();
    r.candidate.iteration = r.iteration;
    r.candidate.name = c.at("name").get<std::string>();
    r.candidate.code = c.at("code").get<std::string>();
    r.candidate.explanation = c.at("explanation").get<std::string>();
    r.candidate.mean = c.at("y").get<double>();
    r.candidate.std = c.at("sigma").get<double>();
    r.candidate.error = OptionalString(c.at("error"));
    r.candidate.parent_id = OptionalString(j.at("parent_id"));
    const json& g = j.at("per_group");
    if (!g.is_null()) {
      r.candidate.group_mean = g.at("mean").get<std::array<double, kNumGroups>>();
      r.candidate.group_std = g.at("std").get<std::array<double, kNumGroups>>();
    }
    const json& u = j.at("usage");
    r.usage.prompt_tokens = u.at("prompt_tokens").get<int64_t>();
    r.usage.completion_tokens = u.at("completion_tokens").get<int64_t>();
    r.generation_calls = u.at("calls").get<int>();
    r.diff_ratio = OptionalNumber(j.at("diff_ratio"));
    r.jaro = OptionalNumber(j.at("jaro"));
    r.best_id = j.at("best").at("id").get<std::string>();
    r.best_y = j.at("best").at("y").get<double>();
    r.prompt = j.at("prompt").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed iteration record: ") + e.what());
  }
}

std::vector<IterationRecord> LoadRecords(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  std::vector<IterationRecord> records;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) break;  // interrupted final write
    const std::string_view line = std::string_view(text).substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    records.push_back(ParseRecord(line));
    if (records.back().iteration != static_cast<int>(records.size()) - 1) {
      throw ParseError("iteration records are not contiguous at line " +
                       std::to_string(records.size()));
    }
  }
  return records;
}

std::string NormalizeTimestamps(std::string_view jsonl) {
  std::string out;
  size_t pos = 0;
  while (pos < jsonl.size()) {
    size_t eol = jsonl.find('\n', pos);
    if (eol == std::string_view::npos) eol = jsonl.size();
    const std::string_view line = jsonl.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("timestamp")) j["timestamp"] = kNormalizedTimestamp;
    out += j.dump() + "\n";
  }
  return out;
}

LoopState StateFromRecords(std::span<const IterationRecord> records) {
  LoopState state;
  for (const IterationRecord& r : records) {
    state.history.entries.push_back({r.candidate.name, r.candidate.mean});
  }
  if (records.empty()) return state;
  state.last = records.back().candidate;
  for (const IterationRecord& r : records) {
    if (r.candidate.id == records.back().best_id) state.history.best = r.candidate;
  }
  if (!state.history.best) {
    throw ParseError("best candidate '" + records.back().best_id + "' is not in the log");
  }
  state.next_iteration = static_cast<int>(records.size());
  return state;
}

std::vector<AnalyticsRow> AnalyticsFromRecords(std::span<const IterationRecord> records) {
  std::map<std::string, const Candidate*> by_id;
  for (const IterationRecord& r : records) by_id[r.candidate.id] = &r.candidate;
  std::vector<AnalyticsRow> rows;
  for (const IterationRecord& r : records) {
    if (!r.candidate.parent_id) continue;
    const auto it = by_id.find(*r.candidate.parent_id);
    if (it == by_id.end()) {
      throw ParseError("parent '" + *r.candidate.parent_id + "' is not in the log");
    }
    const Candidate& parent = *it->second;
    rows.push_back({r.iteration, parent.id, r.candidate.id,
                    DiffRatio(parent.code, r.candidate.code),
                    Jaro(parent.name, r.candidate.name)});
  }
  return rows;
}

void WriteAnalyticsCsv(const std::filesystem::path& path,
                       std::span<const AnalyticsRow> rows) {
  std::string out = "iteration,parent_id,child_id,diff_ratio,jaro\n";
  for (const AnalyticsRow& r : rows) {
    out += std::to_string(r.iteration) + "," + r.parent_id + "," + r.child_id + "," +
           FormatDouble(r.diff_ratio) + "," + FormatDouble(r.jaro) + "\n";
  }
  WriteFile(path, out);
}

// ------------------------------------------------------------- manifest ----

std::string SerializeManifest(const RunManifest& m) {
  json config = json::parse(m.config_json, nullptr, false);
  if (config.is_discarded()) throw ConfigError("manifest config snapshot is not JSON");
  const json doc = {
      {"format", kManifestFormat},
      {"created", m.created},
      {"code_version", m.code_version},
      {"gateway_mode", m.gateway_mode},
      {"seeds", {{"run_seed", m.run_seed}, {"master_seed", m.master_seed}}},
      {"suite_hash", m.suite_hash},
      {"config", config},
  };
  return doc.dump(2) + "\n";
}

RunManifest ParseManifest(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kManifestFormat) {
      throw ParseError("unsupported manifest format");
    }
    RunManifest m;
    m.created = j.at("created").get<std::string>();
    m.code_version = j.at("code_version").get<std::string>();
    m.gateway_mode = j.at("gateway_mode").get<std::string>();
    m.run_seed = j.at("seeds").at("run_seed").get<uint64_t>();
    m.master_seed = j.at("seeds").at("master_seed").get<uint64_t>();
    m.suite_hash = j.at("suite_hash").get<std::string>();
    m.config_json = j.at("config").dump(2);
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed manifest: ") + e.what());
  }
}

std::string_view CodeVersion() { return LLAMEA_VERSION_STRING; }

std::string SuiteHash(int dim, std::span<const int> instances, uint64_t master_seed) {
  std::string text = "dim=" + std::to_string(dim) + ";seed=" + std::to_string(master_seed);
  std::vector<double> x(static_cast<size_t>(dim));
  for (int fid = 1; fid <= kNumFunctions; ++fid) {
    for (int iid : instances) {
      const ProblemInstance inst = MakeInstance(FunctionId(fid), iid, dim, master_seed);
      for (int probe = 0; probe < 3; ++probe) {
        for (int i = 0; i < dim; ++i) x[i] = probe == 0 ? 0.0 : (i % 2 ? 1.5 : -2.5) * probe;
        text += ";" + FormatDouble(Evaluate(inst, x));
      }
    }
  }
  return HashHex(text);
}

// ---------------------------------------------------------- trajectories --

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string EncodeTrajectories(std::span<const Trajectory> runs) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const Trajectory& t : runs) {
    const auto& y = t.best_precision;
    const std::string key =
        std::to_string(t.fid) + "," + std::to_string(t.iid) + "," + std::to_string(t.seed) + ",";
    for (size_t i = 0; i < y.size(); ++i) {
      const bool improvement = i == 0 || y[i] != y[i - 1];
      if (improvement || i + 1 == y.size()) {
        out += key + std::to_string(i + 1) + "," + FormatDouble(y[i]) + "\n";
      }
    }
  }
  return out;
}

std::vector<Trajectory> DecodeTrajectories(std::string_view csv) {
  std::vector<Trajectory> runs;
  size_t pos = 0;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ParseError("trajectory CSV line " + std::to_string(line_no) + ": " + what);
  };
  while (pos < csv.size()) {
    size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kTrajectoryHeader) fail("unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::array<std::string_view, 5> cols;
    size_t start = 0;
    for (size_t c = 0; c < cols.size(); ++c) {
      const size_t comma = c + 1 < cols.size() ? line.find(',', start) : line.size();
      if (comma == std::string_view::npos) fail("expected 5 columns");
      cols[c] = line.substr(start, comma - start);
      start = comma + 1;
    }
    int fid = 0, iid = 0;
    uint64_t seed = 0;
    int64_t index = 0;
    double value = 0.0;
    auto parse = [&](std::string_view s, auto& into) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), into);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("bad number");
    };
    parse(cols[0], fid);
    parse(cols[1], iid);
    parse(cols[2], seed);
    parse(cols[3], index);
    parse(cols[4], value);
    if (index < 1) fail("evaluation_index must be >= 1");
    Trajectory* run = runs.empty() ? nullptr : &runs.back();
    const bool same_run = run && run->fid == fid && run->iid == iid && run->seed == seed &&
                          index > static_cast<int64_t>(run->best_precision.size());
    if (!same_run) {
      if (index != 1) fail("a run must start at evaluation_index 1");
      runs.push_back({fid, iid, seed, {}});
      run = &runs.back();
    }
    auto& y = run->best_precision;
    if (!y.empty()) y.resize(static_cast<size_t>(index - 1), y.back());
    y.push_back(value);
  }
  return runs;
}

void WriteTrajectoryCsv(const std::filesystem::path& path,
                        std::span<const Trajectory> runs) {
  WriteFile(path, EncodeTrajectories(runs));
}

std::vector<Trajectory> ReadTrajectoryCsv(const std::filesystem::path& path) {
  return DecodeTrajectories(ReadFile(path));
}

// ----------------------------------------------------------------- files --

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void AppendLine(const std::filesystem::path& path, std::string_view line) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.put('\n');
  out.flush();
  if (!out) throw std::runtime_error("cannot append to " + path.string());
}

}  // namespace llamea
