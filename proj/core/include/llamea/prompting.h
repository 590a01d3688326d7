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

#ifndef LLAMEA_PROMPTING_H_
#define LLAMEA_PROMPTING_H_

#include <string>
#include <string_view>

#include "llamea/candidate.h"

namespace llamea {

inline constexpr std::string_view kFeedbackInstruction =
    "Either refine or redesign to improve the algorithm.";

struct TaskPromptParams {
  std::string example_code;  // empty: the bundled random-search template
  std::string language = "Python";
  std::string budget_name = "budget";
};

struct TaskPrompt {
  std::string text;
};

struct FeedbackPrompt {
  std::string text;
};

struct ParsedResponse {
  std::string name;
  std::string code;
  std::string explanation;
};

// The random-search example embedded in the task prompt.
std::string_view DefaultExampleCode();

TaskPrompt BuildTaskPrompt(const TaskPromptParams& params = {});

// Task prompt, then the name/score history, then the selected candidate's
// code and scores (ten per-group values when `detailed`), then its error text
// if any, then the fixed instruction sentence.
FeedbackPrompt BuildFeedbackPrompt(const TaskPrompt& task,
                                   const SessionHistory& history,
                                   const Candidate& selected, bool detailed);

// Sent after a response without extractable code.
std::string FormatReminder();

// Canonical "# Name: ... # Code: ```...```" rendering of an answer.
std::string RenderResponse(std::string_view name, std::string_view code);

// Extracts (name, code, explanation). Throws ParseError if no code is found.
ParsedResponse ParseResponse(std::string_view text);

// Four-decimal rendering used for every score in prompts.
std::string FormatScore(double value);

}  // namespace llamea

#endif  // LLAMEA_PROMPTING_H_
