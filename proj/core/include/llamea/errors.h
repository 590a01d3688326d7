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

#ifndef LLAMEA_ERRORS_H_
#define LLAMEA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace llamea {

// Precondition or argument violation (bad dimension, unknown id, empty input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised by BudgetedEvaluator::Spend when the run budget is used up. Harness
// code treats this as normal run termination.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

// Malformed or missing configuration: bad config fields, missing credential.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// LLM response did not contain an extractable code block.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The chat-completion backend failed after all retries.
class GatewayError : public std::runtime_error {
 public:
  explicit GatewayError(const std::string& what, int last_status = 0)
      : std::runtime_error(what), last_status_(last_status) {}
  int last_status() const { return last_status_; }

 private:
  int last_status_;
};

// A scripted mock ran out of responses.
class ScriptExhausted : public GatewayError {
 public:
  ScriptExhausted() : GatewayError("mock gateway script exhausted") {}
};

// A replaying gateway received a request that is not the next recorded one.
class ReplayMiss : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

}  // namespace llamea

#endif  // LLAMEA_ERRORS_H_
