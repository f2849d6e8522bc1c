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

#ifndef DIARTK_CONFIG_H_
#define DIARTK_CONFIG_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace diartk {

// Flat "dotted.key = value" configuration.  '#' starts a comment; blank
// lines are ignored; later assignments override earlier ones.
class Config {
 public:
  Config() = default;
  static Config Parse(const std::string& text);
  static Config ReadFile(const std::string& path);

  void Set(const std::string& key, const std::string& value);
  bool Has(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  // Getters throw ConfigError on malformed values.
  std::string GetString(const std::string& key, const std::string& fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  int GetInt(const std::string& key, int fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;
  // Comma-separated list; empty when the key is missing or blank.
  std::vector<std::string> GetList(const std::string& key) const;
  std::vector<double> GetDoubleList(const std::string& key) const;

  // Distinct first components of all keys ("ahc1" for "ahc1.stop_thr").
  std::vector<std::string> Sections() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace diartk

#endif  // DIARTK_CONFIG_H_
