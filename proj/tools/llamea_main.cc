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

// Command-line front end: evolve, benchmark, analyze, report.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "llamea/errors.h"
#include "llamea/experiment.h"
#include "llamea/optimizers.h"

namespace {

int RunEvolve(const llamea::EvolveOptions& options) {
  const llamea::EvolveResult res = llamea::Evolve(options);
  if (res.exit_code == llamea::kExitOk) {
    std::cout << res.message << "\n";
    if (res.best) {
      std::cout << "best: " << res.best->name << " y=" << res.best->mean << "\n";
    }
  } else {
    std::cerr << "llamea evolve: " << res.message << "\n";
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve optimization metaheuristics with an LLM in the loop, and "
               "benchmark native optimizers on the noiseless suite."};
  app.require_subcommand(1);

  // evolve
  llamea::EvolveOptions evolve;
  std::string config_path, resume_dir, out_dir, gateway_mode, recording;
  int workers = -1;
  bool quiet = false;
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "Run or resume an evolution session");
  evolve_cmd->add_option("--config", config_path, "Experiment config (JSON)");
  evolve_cmd->add_option("--resume", resume_dir, "Continue the session in this directory");
  evolve_cmd->add_option("--out", out_dir, "Session directory (default: sessions/<name>)");
  evolve_cmd->add_option("--gateway", gateway_mode, "LLM backend")
      ->check(CLI::IsMember({"live", "mock", "replay"}));
  evolve_cmd->add_option("--recording", recording, "Recording to replay (replay mode)");
  evolve_cmd->add_option("--workers", workers, "Parallel runs while scoring (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  evolve_cmd->add_flag("--quiet", quiet, "Do not print per-iteration progress");

  // benchmark
  llamea::BenchmarkOptions bench;
  bench.out_dir = "results";
  std::string bench_out = "results";
  CLI::App* bench_cmd =
      app.add_subcommand("benchmark", "Compare native optimizers over the full suite");
  bench_cmd->add_option("--optimizers", bench.optimizers, "Optimizer ids")
      ->delimiter(',')
      ->check(CLI::IsMember(llamea::NativeOptimizerIds()));
  bench_cmd->add_option("--dims", bench.dims, "Dimensions")->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--instances", bench.instances, "Instances per function (ids 1..n)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seeds", bench.seeds, "Runs per instance")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--budget", bench.budget, "Evaluations per run")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--master-seed", bench.master_seed, "Seed of instances and runs");
  bench_cmd->add_option("--workers", bench.workers, "Parallel runs (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--erads-preset", bench.erads_preset, "ERADS hyper-parameter preset")
      ->check(CLI::IsMember(llamea::EradsPresetNames()));
  bench_cmd->add_option("--out", bench_out, "Results directory");

  // analyze / report
  std::string analyze_dir, report_dir;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Derive analytics from a session or results directory");
  analyze_cmd->add_option("dir", analyze_dir, "Session or results directory")->required();
  CLI::App* report_cmd =
      app.add_subcommand("report", "Summarize a session or results directory");
  report_cmd->add_option("dir", report_dir, "Session or results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return llamea::kExitConfig;
  }

  try {
    if (evolve_cmd->parsed()) {
      if (config_path.empty() == resume_dir.empty()) {
        std::cerr << "llamea evolve: give exactly one of --config or --resume\n";
        return llamea::kExitConfig;
      }
      evolve.config_path = config_path;
      if (!resume_dir.empty()) evolve.resume = resume_dir;
      evolve.out_dir = out_dir;
      if (!gateway_mode.empty()) evolve.gateway_mode = gateway_mode;
      if (!recording.empty()) evolve.recording = recording;
      if (workers >= 0) evolve.workers = workers;
      if (!quiet) evolve.log = &std::cerr;
      return RunEvolve(evolve);
    }
    if (bench_cmd->parsed()) {
      bench.out_dir = bench_out;
      const llamea::BenchmarkResult res = llamea::RunBenchmark(bench);
      std::cout << llamea::Report(bench.out_dir);
      std::cout << "results written to " << bench.out_dir.string() << "\n";
      return llamea::kExitOk;
    }
    if (analyze_cmd->parsed()) {
      for (const auto& path : llamea::Analyze(analyze_dir)) {
        std::cout << path.string() << "\n";
      }
      return llamea::kExitOk;
    }
    if (report_cmd->parsed()) {
      std::cout << llamea::Report(report_dir);
      return llamea::kExitOk;
    }
  } catch (const llamea::ConfigError& e) {
    std::cerr << "llamea: " << e.what() << "\n";
    return llamea::kExitConfig;
  } catch (const llamea::DomainError& e) {
    std::cerr << "llamea: " << e.what() << "\n";
    return llamea::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "llamea: " << e.what() << "\n";
    return llamea::kExitFailure;
  }
  return llamea::kExitFailure;
}
