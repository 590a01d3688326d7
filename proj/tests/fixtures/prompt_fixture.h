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


#ifndef LLAMEA_TESTS_FIXTURES_PROMPT_FIXTURE_H_
#define LLAMEA_TESTS_FIXTURES_PROMPT_FIXTURE_H_

#include <array>
#include <fstream>
#include <sstream>
#include <string>

#include "llamea/candidate.h"
#include "llamea/prompting.h"

namespace llamea::testing {

// Fixed history and selected candidate whose prompts are pinned in
// tests/golden. Shared by the unit tests and the acceptance binary.
inline SessionHistory GoldenHistory() {
  SessionHistory h;
  h.entries = {{"UniformRandomSearch", 0.0743},
               {"ClassicDifferentialEvolution", 0.12816},
               {"EnhancedRandomAdaptiveDESearch", 0.23984}};
  return h;
}

inline Candidate GoldenSelected(bool with_error) {
  Candidate c;
  c.id = "a2";
  c.iteration = 2;
  c.name = "EnhancedRandomAdaptiveDESearch";
  c.code =
      "class EnhancedRandomAdaptiveDESearch:\n"
      "    def __init__(self, budget=10000, dim=10):\n"
      "        self.budget = budget\n"
      "        self.dim = dim\n";
  c.mean = 0.23984;
  c.std = 0.01537;
  c.group_mean = std::array<double, kNumGroups>{0.41, 0.22, 0.19, 0.15, 0.23};
  c.group_std = std::array<double, kNumGroups>{0.02, 0.031, 0.0105, 0.004, 0.05};
  if (with_error) {
    c.mean = 0.0;
    c.std = 0.0;
    c.group_mean.reset();
    c.group_std.reset();
    c.error =
        "Traceback (most recent call last):\n"
        "  File \"candidate.py\", line 12, in __call__\n"
        "ZeroDivisionError: division by zero";
  }
  return c;
}

inline std::string ReadGolden(const std::string& name) {
  std::ifstream in(std::string(LLAMEA_GOLDEN_DIR) + "/" + name,
                   std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace llamea::testing

#endif  // LLAMEA_TESTS_FIXTURES_PROMPT_FIXTURE_H_
