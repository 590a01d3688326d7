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

#include "llamea/prompting.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <vector>

#include "llamea/embedded_templates.h"
#include "llamea/errors.h"

namespace llamea {
namespace {

std::string ReplaceAll(std::string text, std::string_view key,
                       std::string_view value) {
  size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

std::string_view TrimNewlines(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string JoinLines(const std::vector<std::string_view>& lines, size_t begin,
                      size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out += '\n';
    out += lines[i];
  }
  return out;
}

bool IsFence(std::string_view line) {
  return Trim(line).substr(0, 3) == "```";
}

// Removes markdown emphasis, quotes and stray heading marks around a name.
std::string CleanName(std::string_view raw) {
  std::string_view s = Trim(raw);
  auto is_markup = [](char c) {
    return c == '*' || c == '`' || c == '"' || c == '\'' || c == '#' ||
           c == '_' || std::isspace(static_cast<unsigned char>(c));
  };
  while (!s.empty() && is_markup(s.front())) s.remove_prefix(1);
  while (!s.empty() && (is_markup(s.back()) || s.back() == '.' || s.back() == ':')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Returns the text after "<label>:" when the line is a (possibly marked-up)
// "# Label:" line.
std::optional<std::string_view> LabelValue(std::string_view line,
                                           std::string_view label) {
  std::string_view s = Trim(line);
  while (!s.empty() && (s.front() == '#' || s.front() == '*' || s.front() == ' ')) {
    s.remove_prefix(1);
  }
  if (s.size() < label.size() || Lower(s.substr(0, label.size())) != label) {
    return std::nullopt;
  }
  s.remove_prefix(label.size());
  while (!s.empty() && s.front() == '*') s.remove_prefix(1);
  s = Trim(s);
  if (s.empty() || s.front() != ':') return std::nullopt;
  s.remove_prefix(1);
  while (!s.empty() && s.front() == '*') s.remove_prefix(1);
  return Trim(s);
}

std::string ClassNameIn(std::string_view code) {
  for (std::string_view line : SplitLines(code)) {
    std::string_view s = Trim(line);
    if (s.substr(0, 6) != "class ") continue;
    s.remove_prefix(6);
    size_t n = 0;
    while (n < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[n])) || s[n] == '_')) {
      ++n;
    }
    if (n > 0) return std::string(s.substr(0, n));
  }
  return {};
}

}  // namespace

std::string_view DefaultExampleCode() { return templates::random_search_py(); }

std::string FormatScore(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

TaskPrompt BuildTaskPrompt(const TaskPromptParams& params) {
  const std::string_view example =
      params.example_code.empty() ? DefaultExampleCode()
                                  : std::string_view(params.example_code);
  std::string text(templates::task_prompt_txt());
  text = ReplaceAll(std::move(text), "{{language}}", params.language);
  text = ReplaceAll(std::move(text), "{{budget}}", params.budget_name);
  text = ReplaceAll(std::move(text), "{{example_code}}", TrimNewlines(example));
  return {std::move(text)};
}

FeedbackPrompt BuildFeedbackPrompt(const TaskPrompt& task,
                                   const SessionHistory& history,
                                   const Candidate& selected, bool detailed) {
  std::string out = task.text;
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += "The current population of algorithms already evaluated (name, score) is:\n";
  for (const HistoryEntry& e : history.entries) {
    out += e.name + ": " + FormatScore(e.mean) + "\n";
  }
  out += "\nThe selected solution to update is:\n";
  out += selected.name + "\n";
  out += "With code:\n```\n";
  out += TrimNewlines(selected.code);
  out += "\n```\n";
  if (detailed) {
    out += "The algorithm " + selected.name +
           " got the following mean (standard deviation) AOCC scores per "
           "function group:\n";
    for (int g = 0; g < kNumGroups; ++g) {
      const double mean = selected.group_mean ? (*selected.group_mean)[g] : 0.0;
      const double std = selected.group_std ? (*selected.group_std)[g] : 0.0;
      out += std::string(GroupName(static_cast<FunctionGroup>(g))) + ": " +
             FormatScore(mean) + " (" + FormatScore(std) + ")\n";
    }
  } else {
    out += "The algorithm " + selected.name + " got an average AOCC score of " +
           FormatScore(selected.mean) + " with standard deviation " +
           FormatScore(selected.std) + ".\n";
  }
  if (selected.error && !selected.error->empty()) {
    out += "The algorithm " + selected.name + " raised the following error:\n";
    out += *selected.error;
    if (out.back() != '\n') out += '\n';
  }
  out += "\n";
  out += kFeedbackInstruction;
  return {std::move(out)};
}

std::string FormatReminder() {
  return "The previous response did not follow the provided format. Give the "
         "response in the format:\n# Name: <name of the algorithm>\n# Code: "
         "<code>\nwith the code in a single fenced markdown code block.";
}

std::string RenderResponse(std::string_view name, std::string_view code) {
  std::string out = "# Name: ";
  out += name;
  out += "\n# Code:\n```python\n";
  out += code;
  out += "\n```\n";
  return out;
}

ParsedResponse ParseResponse(std::string_view text) {
  const std::vector<std::string_view> lines = SplitLines(text);
  std::vector<bool> consumed(lines.size(), false);

  // Fenced blocks: [open, close) line ranges, close == lines.size() when the
  // block is never terminated.
  std::optional<std::pair<size_t, size_t>> closed_block;
  std::optional<std::pair<size_t, size_t>> open_block;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (!IsFence(lines[i])) continue;
    size_t j = i + 1;
    while (j < lines.size() && !IsFence(lines[j])) ++j;
    if (j < lines.size()) {
      closed_block = {i, j};
      break;
    }
    open_block = {i, lines.size()};
    break;
  }

  ParsedResponse out;
  std::optional<size_t> code_label;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (LabelValue(lines[i], "code")) {
      code_label = i;
      break;
    }
  }
  if (closed_block || open_block) {
    const auto [open, close] = closed_block ? *closed_block : *open_block;
    out.code = JoinLines(lines, open + 1, close);
    for (size_t i = open; i < std::min(close + 1, lines.size()); ++i) consumed[i] = true;
  } else if (code_label) {
    std::string rest(*LabelValue(lines[*code_label], "code"));
    const std::string tail = JoinLines(lines, *code_label + 1, lines.size());
    if (!rest.empty() && !tail.empty()) rest += '\n';
    rest += tail;
    out.code = std::string(TrimNewlines(rest));
    for (size_t i = *code_label; i < lines.size(); ++i) consumed[i] = true;
  }
  if (Trim(out.code).empty()) {
    throw ParseError("response contains no code block");
  }
  if (code_label) consumed[*code_label] = true;

  for (size_t i = 0; i < lines.size() && out.name.empty(); ++i) {
    if (consumed[i]) continue;
    if (auto v = LabelValue(lines[i], "name")) {
      out.name = CleanName(*v);
      consumed[i] = true;
    }
  }
  for (size_t i = 0; i < lines.size() && out.name.empty(); ++i) {
    if (consumed[i]) continue;
    std::string_view s = Trim(lines[i]);
    if (!s.empty() && s.front() == '#') {
      out.name = CleanName(s);
      consumed[i] = !out.name.empty();
    }
  }
  if (out.name.empty()) out.name = ClassNameIn(out.code);
  if (out.name.empty()) out.name = "UnnamedAlgorithm";

  std::vector<std::string_view> rest;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (!consumed[i]) rest.push_back(lines[i]);
  }
  out.explanation = std::string(Trim(JoinLines(rest, 0, rest.size())));
  return out;
}

}  // namespace llamea
