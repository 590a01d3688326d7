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

#ifndef LLAMEA_RNG_H_
#define LLAMEA_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace llamea {

// Repo-wide random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; all conversions to reals and
// bounded integers are done here rather than by <random> distributions,
// whose algorithms are implementation-defined. Same seed, same stream, on
// every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n); n must be > 0. Unbiased (rejection).
  uint64_t Below(uint64_t n);
  // Standard normal via Box-Muller; caches the second variate.
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

// Order-sensitive combination of several integers into one seed.
uint64_t DeriveSeed(std::initializer_list<uint64_t> parts);

}  // namespace llamea

#endif  // LLAMEA_RNG_H_
