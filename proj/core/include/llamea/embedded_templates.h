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

#ifndef LLAMEA_EMBEDDED_TEMPLATES_H_
#define LLAMEA_EMBEDDED_TEMPLATES_H_

#include <string_view>

// Text fixtures from core/templates, compiled into the library.
namespace llamea::templates {

std::string_view task_prompt_txt();
std::string_view random_search_py();

}  // namespace llamea::templates

#endif  // LLAMEA_EMBEDDED_TEMPLATES_H_
