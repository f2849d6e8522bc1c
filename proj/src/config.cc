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

#include "diartk/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "diartk/errors.h"
#include "diartk/text_util.h"

namespace diartk {

Config Config::Parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    cfg.values_[key] = Trim(trimmed.substr(eq + 1));
  }
  return cfg;
}

Config Config::ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

void Config::Set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool Config::Has(const std::string& key) const { return values_.contains(key); }

std::string Config::GetString(const std::string& key,
                              const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::GetDouble(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  double v = 0;
  if (!ParseDouble(it->second, &v)) {
    throw ConfigError(key + ": expected a number, got '" + it->second + "'");
  }
  return v;
}

int Config::GetInt(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  long long v = 0;
  if (!ParseInt(it->second, &v)) {
    throw ConfigError(key + ": expected an integer, got '" + it->second + "'");
  }
  return static_cast<int>(v);
}

bool Config::GetBool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> Config::GetList(const std::string& key) const {
  std::vector<std::string> out;
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return out;
  for (const std::string& item : Split(it->second, ',')) {
    std::string t = Trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> Config::GetDoubleList(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : GetList(key)) {
    double v = 0;
    if (!ParseDouble(item, &v)) {
      throw ConfigError(key + ": expected numbers, got '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> Config::Sections() const {
  std::set<std::string> names;
  for (const auto& [key, value] : values_) {
    names.insert(key.substr(0, key.find('.')));
  }
  return {names.begin(), names.end()};
}

}  // namespace diartk
