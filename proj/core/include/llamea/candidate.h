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

#ifndef LLAMEA_CANDIDATE_H_
#define LLAMEA_CANDIDATE_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "llamea/bench_suite.h"

namespace llamea {

// One generated algorithm and its measured quality. A non-empty error
// implies mean == 0.
struct Candidate {
  std::string id;
  int iteration = 0;
  std::string name;
  std::string code;
  std::string explanation;  // stored for offline reading, never fed back
  double mean = 0.0;
  double std = 0.0;
  std::optional<std::array<double, kNumGroups>> group_mean;
  std::optional<std::array<double, kNumGroups>> group_std;
  std::optional<std::string> error;
  std::optional<std::string> parent_id;
};

struct HistoryEntry {
  std::string name;
  double mean = 0.0;
};

// Names and scores of every evaluated candidate, plus the best-so-far.
struct SessionHistory {
  std::vector<HistoryEntry> entries;
  std::optional<Candidate> best;
};

}  // namespace llamea

#endif  // LLAMEA_CANDIDATE_H_
