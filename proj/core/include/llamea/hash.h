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

#ifndef LLAMEA_HASH_H_
#define LLAMEA_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace llamea {

// 64-bit FNV-1a. Used to pin golden prompts and fingerprint suite/config
// definitions in run manifests; not a cryptographic hash.
uint64_t Fnv1a64(std::string_view data);

// Lower-case, zero-padded 16-digit hex rendering of Fnv1a64(data).
std::string HashHex(std::string_view data);

}  // namespace llamea

#endif  // LLAMEA_HASH_H_
