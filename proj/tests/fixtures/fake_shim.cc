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

// Scripted stand-in for a candidate-language shim. The candidate "code" in
// the init message names a scenario (first word) plus optional arguments;
// each scenario exercises one path of the host side of the line protocol.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;

std::ofstream* transcript = nullptr;

void Send(const json& msg) {
  const std::string line = msg.dump();
  std::cout << line << '\n' << std::flush;
  if (transcript) *transcript << "S " << line << '\n' << std::flush;
}

// Returns the reply value, or nullopt on exhaustion. Exits on EOF.
bool Eval(const std::vector<double>& x, double* y) {
  Send({{"eval", {{"x", x}}}});
  std::string line;
  if (!std::getline(std::cin, line)) std::exit(4);
  if (transcript) *transcript << "H " << line << '\n' << std::flush;
  const json reply = json::parse(line);
  if (reply.contains("exhausted")) return false;
  *y = reply.at("y").get<double>();
  return true;
}

}  // namespace

int main() {
  std::string line;
  if (!std::getline(std::cin, line)) return 4;
  const json init = json::parse(line).at("init");
  const int dim = init.at("dim");
  const int64_t budget = init.at("budget");
  const double lo = init.at("bounds").at(0);
  const double hi = init.at("bounds").at(1);
  const uint64_t seed = init.at("seed");
  std::istringstream code(init.at("code").get<std::string>());
  std::string scenario;
  code >> scenario;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  auto random_point = [&] {
    std::vector<double> x(dim);
    for (double& v : x) v = unif(rng);
    return x;
  };
  double y = 0.0;

  if (scenario == "record") {
    std::string path;
    code >> path;
    static std::ofstream out(path, std::ios::binary);
    transcript = &out;
    out << "H " << line << '\n';
    for (int i = 0; i < 3; ++i) {
      std::vector<double> x(dim, 0.5 * i);
      if (!Eval(x, &y)) break;
    }
    Send({{"done", {{"evaluations", 3}}}});
  } else if (scenario == "random_search" || scenario == "early_done") {
    const int64_t n = scenario == "early_done" ? std::min<int64_t>(10, budget) : budget;
    double best = 1e300;
    for (int64_t i = 0; i < n; ++i) {
      if (!Eval(random_point(), &y)) break;
      best = std::min(best, y);
    }
    Send({{"done", {{"f_opt", best}}}});
  } else if (scenario == "overbudget") {
    int exhausted = 0;
    for (int64_t i = 0; i < budget + 10; ++i) exhausted += !Eval(random_point(), &y);
    Send({{"done", {{"exhausted_replies", exhausted}}}});
  } else if (scenario == "syntax_error") {
    Send({{"error",
           {{"message", "SyntaxError: invalid syntax (candidate.py, line 3)"},
            {"phase", "load"}}}});
  } else if (scenario == "zero_division") {
    Send({{"error",
           {{"message",
             "Traceback (most recent call last):\n  File \"candidate.py\", line 7, "
             "in __init__\n    self.rate = 1 / 0\nZeroDivisionError: division by zero"},
            {"phase", "run"}}}});
  } else if (scenario == "partial_error") {
    for (int i = 0; i < 5; ++i) Eval(random_point(), &y);
    Send({{"error", {{"message", "ValueError: late failure"}, {"phase", "run"}}}});
  } else if (scenario == "long_error") {
    Send({{"error", {{"message", std::string(10000, 'x') + "TailError: end"},
                     {"phase", "run"}}}});
  } else if (scenario == "hang") {
    std::this_thread::sleep_for(std::chrono::hours(1));
  } else if (scenario == "fork_hang") {
    if (::fork() == 0) {
      // The grandchild holds stdout open; the host must kill the group.
      std::this_thread::sleep_for(std::chrono::hours(1));
    }
    std::this_thread::sleep_for(std::chrono::hours(1));
  } else if (scenario == "garbage") {
    std::cout << "hello, this is not JSON\n" << std::flush;
    std::this_thread::sleep_for(std::chrono::hours(1));
  } else if (scenario == "crash") {
    std::cerr << "Fatal Python error: Segmentation fault\n" << std::flush;
    std::_Exit(139);
  } else if (scenario == "silent_exit") {
    return 0;
  } else if (scenario == "wrong_dim") {
    std::vector<double> x(dim + 1, 0.0);
    Eval(x, &y);
  } else if (scenario == "unknown_message") {
    Send({{"progress", 0.5}});
    std::this_thread::sleep_for(std::chrono::hours(1));
  } else {
    Send({{"error", {{"message", "NameError: unknown scenario " + scenario},
                     {"phase", "load"}}}});
  }
  return 0;
}
