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

#include "llamea/run_analysis.h"

#include <algorithm>
#include <cctype>

namespace llamea {
namespace {

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

size_t LcsLength(const std::vector<std::string_view>& a,
                 const std::vector<std::string_view>& b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool IsUpper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool IsLower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsAbbreviation(std::string_view token) {
  int letters = 0;
  for (char c : token) {
    if (IsLower(c)) return false;
    letters += IsUpper(c);
  }
  return letters >= 2;
}

}  // namespace

double DiffRatio(std::string_view parent_code, std::string_view child_code) {
  const auto a = Lines(parent_code);
  const auto b = Lines(child_code);
  const size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(longest - LcsLength(a, b)) / static_cast<double>(longest);
}

double Jaro(std::string_view s, std::string_view t) {
  if (s.empty() || t.empty()) return 0.0;  // no matching characters
  const size_t window = std::max<size_t>(std::max(s.size(), t.size()) / 2, 1) - 1;
  std::vector<bool> s_matched(s.size(), false), t_matched(t.size(), false);
  size_t m = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    const size_t lo = i >= window ? i - window : 0;
    const size_t hi = std::min(t.size(), i + window + 1);
    for (size_t j = lo; j < hi; ++j) {
      if (!t_matched[j] && s[i] == t[j]) {
        s_matched[i] = t_matched[j] = true;
        ++m;
        break;
      }
    }
  }
  if (m == 0) return 0.0;
  size_t out_of_order = 0;
  for (size_t i = 0, j = 0; i < s.size(); ++i) {
    if (!s_matched[i]) continue;
    while (!t_matched[j]) ++j;
    out_of_order += s[i] != t[j];
    ++j;
  }
  const double md = static_cast<double>(m);
  const double transpositions = static_cast<double>(out_of_order / 2);
  return (md / static_cast<double>(s.size()) + md / static_cast<double>(t.size()) +
          (md - transpositions) / md) /
         3.0;
}

std::vector<std::string> SplitName(std::string_view name) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (!IsAlnum(c)) {
      flush();
      continue;
    }
    if (IsUpper(c) && !cur.empty()) {
      const char prev = cur.back();
      const bool next_lower = i + 1 < name.size() && IsLower(name[i + 1]);
      // "aB" starts a word; in "ABc" the B starts the word "Bc".
      if (!IsUpper(prev) || next_lower) flush();
    }
    cur.push_back(c);
  }
  flush();
  return tokens;
}

std::map<std::string, int> NameTokens(const std::vector<std::string>& names) {
  std::map<std::string, int> counts;     // lower-case key
  std::map<std::string, bool> abbrev;    // key seen as an abbreviation
  for (const std::string& name : names) {
    for (const std::string& token : SplitName(name)) {
      const std::string key = Lower(token);
      ++counts[key];
      abbrev[key] = abbrev[key] || IsAbbreviation(token);
    }
  }
  std::map<std::string, int> out;
  for (const auto& [key, n] : counts) {
    std::string label = key;
    if (abbrev[key]) {
      for (char& c : label) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    out[label] += n;
  }
  return out;
}

}  // namespace llamea
