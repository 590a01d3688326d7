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

#include "llamea/candidate_executor.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "llamea/errors.h"

namespace llamea {
namespace {

ExecutionSpec Spec(const std::string& code, int64_t budget = 50) {
  ExecutionSpec s;
  s.code = code;
  s.dim = 3;
  s.budget = budget;
  s.timeout = std::chrono::milliseconds(5000);
  s.fid = 2;
  s.iid = 1;
  s.seed = 7;
  s.master_seed = 1;
  return s;
}

SubprocessExecutor Shim() { return SubprocessExecutor({LLAMEA_FAKE_SHIM}); }

TEST(SubprocessExecutor, RandomSearchConsumesExactlyBudget) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("random_search", 200));
  EXPECT_FALSE(out.error) << *out.error;
  ASSERT_TRUE(out.trajectory);
  EXPECT_EQ(out.evaluations, 200);
  EXPECT_EQ(out.trajectory->best_precision.size(), 200u);
  for (size_t i = 1; i < 200; ++i) {
    EXPECT_LE(out.trajectory->best_precision[i], out.trajectory->best_precision[i - 1]);
  }
}

TEST(SubprocessExecutor, OverBudgetIsTruncatedAndEndsCleanly) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("overbudget", 40));
  EXPECT_FALSE(out.error) << *out.error;
  EXPECT_EQ(out.evaluations, 40);
  ASSERT_TRUE(out.trajectory);
  EXPECT_EQ(out.trajectory->best_precision.size(), 40u);
}

TEST(SubprocessExecutor, LoadErrorBillsNothing) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("syntax_error"));
  ASSERT_TRUE(out.error);
  EXPECT_NE(out.error->find("SyntaxError"), std::string::npos);
  EXPECT_EQ(out.error_phase, "load");
  EXPECT_EQ(out.evaluations, 0);
  EXPECT_FALSE(out.trajectory);
}

TEST(SubprocessExecutor, StartupExceptionNamesTheException) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("zero_division"));
  ASSERT_TRUE(out.error);
  EXPECT_NE(out.error->find("ZeroDivisionError"), std::string::npos);
  EXPECT_FALSE(out.trajectory);
}

TEST(SubprocessExecutor, LateErrorKeepsPartialTrajectory) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("partial_error", 30));
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error_phase, "run");
  EXPECT_EQ(out.evaluations, 5);
  ASSERT_TRUE(out.trajectory);
  EXPECT_EQ(out.trajectory->best_precision.size(), 30u);
}

TEST(SubprocessExecutor, EarlyDoneIsPadded) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("early_done", 100));
  EXPECT_FALSE(out.error);
  EXPECT_EQ(out.evaluations, 10);
  ASSERT_TRUE(out.trajectory);
  EXPECT_EQ(out.trajectory->best_precision.size(), 100u);
  EXPECT_EQ(out.trajectory->best_precision[99], out.trajectory->best_precision[9]);
}

TEST(SubprocessExecutor, HangTimesOut) {
  auto ex = Shim();
  ExecutionSpec spec = Spec("hang");
  spec.timeout = std::chrono::milliseconds(300);
  const ExecutionOutcome out = ex.Execute(spec);
  EXPECT_EQ(out.error, "timeout");
  EXPECT_LT(out.wall_time.count(), 3000);
}

TEST(SubprocessExecutor, TimeoutKillsTheWholeProcessGroup) {
  auto ex = Shim();
  ExecutionSpec spec = Spec("fork_hang");
  spec.timeout = std::chrono::milliseconds(300);
  const ExecutionOutcome out = ex.Execute(spec);
  EXPECT_EQ(out.error, "timeout");
  EXPECT_LT(out.wall_time.count(), 3000);
}

TEST(SubprocessExecutor, GarbageIsProtocolViolation) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("garbage"));
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error->rfind("protocol", 0), 0u) << *out.error;
}

TEST(SubprocessExecutor, UnknownMessageIsProtocolViolation) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("unknown_message"));
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error->rfind("protocol", 0), 0u) << *out.error;
}

TEST(SubprocessExecutor, WrongDimensionIsProtocolViolation) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("wrong_dim"));
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error->rfind("protocol", 0), 0u);
  EXPECT_EQ(out.evaluations, 0);
}

TEST(SubprocessExecutor, SilentExitIsProtocolViolation) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("silent_exit"));
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error->rfind("protocol", 0), 0u);
}

TEST(SubprocessExecutor, CrashCapturesStderr) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("crash"));
  ASSERT_TRUE(out.error);
  EXPECT_NE(out.error->find("Segmentation fault"), std::string::npos) << *out.error;
}

TEST(SubprocessExecutor, ErrorTextIsCapped) {
  auto ex = Shim();
  const ExecutionOutcome out = ex.Execute(Spec("long_error"));
  ASSERT_TRUE(out.error);
  EXPECT_LE(out.error->size(), kErrorCap);
  EXPECT_NE(out.error->find("TailError: end"), std::string::npos);
}

TEST(SubprocessExecutor, MissingShimBinaryIsAnError) {
  SubprocessExecutor ex({"/nonexistent/llamea-shim"});
  const ExecutionOutcome out = ex.Execute(Spec("random_search"));
  ASSERT_TRUE(out.error);
  EXPECT_FALSE(out.trajectory);
}

TEST(SubprocessExecutor, DeterministicForDeterministicCandidates) {
  auto ex = Shim();
  const auto a = ex.Execute(Spec("random_search", 100));
  const auto b = ex.Execute(Spec("random_search", 100));
  ASSERT_TRUE(a.trajectory && b.trajectory);
  EXPECT_EQ(a.trajectory->best_precision, b.trajectory->best_precision);
}

TEST(SubprocessExecutor, TranscriptMatchesLineProtocolByteForByte) {
  const auto path = std::filesystem::temp_directory_path() /
                    ("llamea_transcript_" + std::to_string(::getpid()) + ".txt");
  auto ex = Shim();
  ExecutionSpec spec = Spec("record " + path.string(), 2);
  spec.dim = 2;
  spec.seed = 3;
  const ExecutionOutcome out = ex.Execute(spec);
  EXPECT_FALSE(out.error);
  EXPECT_EQ(out.evaluations, 2);
  std::ifstream in(path);
  std::stringstream got;
  got << in.rdbuf();
  // f2 is separable and unrotated: values depend only on the shifted point.
  const ProblemInstance inst = MakeInstance(FunctionId(2), 1, 2, 1);
  auto y = [&](double v) {
    std::vector<double> x(2, v);
    return nlohmann::json(Evaluate(inst, x)).dump();
  };
  const std::string expected =
      "H {\"init\":{\"dim\":2,\"budget\":2,\"bounds\":[-5.0,5.0],\"seed\":3,"
      "\"code\":\"record " + path.string() + "\"}}\n"
      "S {\"eval\":{\"x\":[0.0,0.0]}}\n"
      "H {\"y\":" + y(0.0) + "}\n"
      "S {\"eval\":{\"x\":[0.5,0.5]}}\n"
      "H {\"y\":" + y(0.5) + "}\n"
      "S {\"eval\":{\"x\":[1.0,1.0]}}\n"
      "H {\"exhausted\":true}\n"
      "S {\"done\":{\"evaluations\":3}}\n";
  EXPECT_EQ(got.str(), expected);
  std::filesystem::remove(path);
}

TEST(SubprocessExecutor, ParallelSessionsAreIndependent) {
  auto ex = Shim();
  std::vector<std::thread> threads;
  std::vector<ExecutionOutcome> outs(8);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] { outs[i] = ex.Execute(Spec("random_search", 100)); });
  }
  for (auto& t : threads) t.join();
  for (const auto& o : outs) {
    ASSERT_TRUE(o.trajectory);
    EXPECT_EQ(o.trajectory->best_precision, outs[0].trajectory->best_precision);
  }
}

TEST(ExecutionSpec, ValidatesInvariants) {
  ExecutionSpec s = Spec("x");
  s.timeout = std::chrono::milliseconds(0);
  EXPECT_THROW(s.Validate(), DomainError);
  s = Spec("x", 0);
  EXPECT_THROW(s.Validate(), DomainError);
}

TEST(CapErrorText, KeepsTailWithinCap) {
  EXPECT_EQ(CapErrorText("short"), "short");
  const std::string capped = CapErrorText(std::string(5000, 'a') + "END", 100);
  EXPECT_EQ(capped.size(), 100u);
  EXPECT_EQ(capped.substr(0, 3), "...");
  EXPECT_EQ(capped.substr(97), "END");
  // A cut inside a multi-byte character moves forward to the next boundary.
  const std::string utf8 = CapErrorText(std::string(50, 'a') + "\xC3\xA9" + "zz", 6);
  EXPECT_EQ(utf8, "...zz");
}

TEST(NativeExecute, MatchesDirectOptimizerRun) {
  ExecutionSpec spec = Spec("", 500);
  spec.fid = 1;
  const ExecutionOutcome out = NativeExecute("erads", spec);
  BudgetedEvaluator ev(MakeInstance(FunctionId(1), 1, 3, 1), 500);
  RunErads(EradsParams{}, ev, spec.seed);
  ASSERT_TRUE(out.trajectory);
  EXPECT_EQ(out.trajectory->best_precision, ev.trace());
  EXPECT_EQ(out.evaluations, 500);
}

TEST(NativeExecute, DeterministicAndShapedLikeShimRuns) {
  const auto a = NativeExecute("de", Spec("", 300));
  const auto b = NativeExecute("de", Spec("", 300));
  EXPECT_EQ(a.trajectory->best_precision, b.trajectory->best_precision);
  const auto rs = NativeExecute("random_search", Spec("", 10));
  EXPECT_EQ(rs.trajectory->best_precision.size(), 10u);
  EXPECT_THROW(NativeExecute("cma-es", Spec("")), DomainError);
}

TEST(NativeExecute, OptimizerFailureIsCaptured) {
  // ERADS needs at least one full population of evaluations.
  const auto out = NativeExecute("erads", Spec("", 10));
  EXPECT_TRUE(out.error);
}

TEST(NativeExecutor, DispatchesOnDirective) {
  NativeExecutor ex;
  const auto ok = ex.Execute(Spec("class X:\n    pass\n# native-optimizer: random_search\n", 20));
  EXPECT_FALSE(ok.error);
  EXPECT_EQ(ok.evaluations, 20);
  const auto preset = ex.Execute(
      Spec("# native-optimizer: erads\n# erads-preset: optimized-5d\n", 200));
  EXPECT_FALSE(preset.error);
  const auto none = ex.Execute(Spec("def f(): return 1/0\n"));
  ASSERT_TRUE(none.error);
  EXPECT_FALSE(none.trajectory);
  const auto bad = ex.Execute(Spec("# native-optimizer: nope\n"));
  EXPECT_TRUE(bad.error);
}

TEST(FindDirective, ParsesCommentLines) {
  EXPECT_EQ(FindDirective("x\n  #  native-optimizer :  de \n", "native-optimizer"), "de");
  EXPECT_FALSE(FindDirective("native-optimizer: de", "native-optimizer"));
  EXPECT_FALSE(FindDirective("# native-optimizers: de", "native-optimizer"));
}

}  // namespace
}  // namespace llamea
