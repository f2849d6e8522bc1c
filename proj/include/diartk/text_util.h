// Copyright (c) 2026 diartk authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIARTK_TEXT_UTIL_H_
#define DIARTK_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace diartk {

std::vector<std::string> SplitWhitespace(std::string_view line);
std::vector<std::string> Split(std::string_view text, char delim);
std::string Trim(std::string_view text);

// Strict full-string numeric parsing; false on any trailing garbage.
bool ParseDouble(std::string_view text, double* value);
bool ParseInt(std::string_view text, long long* value);

// Shortest text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace diartk

#endif  // DIARTK_TEXT_UTIL_H_
