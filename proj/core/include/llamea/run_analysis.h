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

#ifndef LLAMEA_RUN_ANALYSIS_H_
#define LLAMEA_RUN_ANALYSIS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace llamea {

// Fraction of lines that differ between two programs: with L the length of
// the longest common line subsequence of n and m lines, (max(n, m) - L) /
// max(n, m). A replaced line counts once. Two empty inputs give 0.
double DiffRatio(std::string_view parent_code, std::string_view child_code);

// Jaro similarity with the classical matching window
// max(0, floor(max(|s|, |t|) / 2) - 1); 0 when nothing matches, which
// includes any empty argument.
double Jaro(std::string_view s, std::string_view t);

// Splits an identifier at case boundaries and non-alphanumerics. Runs of
// capitals stay whole ("HTTPServer" -> "HTTP", "Server"); digits stick to
// the preceding token.
std::vector<std::string> SplitName(std::string_view name);

// Token frequencies over algorithm names, counted case-insensitively.
// Abbreviations (all-capital tokens of two or more letters) are reported in
// capitals, other tokens in lower case.
std::map<std::string, int> NameTokens(const std::vector<std::string>& names);

// Parent-offspring comparison for one generation step.
struct AnalyticsRow {
  int iteration = 0;
  std::string parent_id;
  std::string child_id;
  double diff_ratio = 0.0;
  double jaro = 0.0;
};

}  // namespace llamea

#endif  // LLAMEA_RUN_ANALYSIS_H_
