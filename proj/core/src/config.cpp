// Copyright 2026 The CCDF Authors.
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

#include "ccdf/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ccdf::config {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw CcdfError(ErrorCode::kConfig, "bad-config-value",
                  "cannot parse value '" + value + "' for key '" + key + "'");
}

}  // namespace

Config Config::from_file(const std::string& path, const std::vector<std::string>& known_keys) {
  std::ifstream in(path);
  if (!in)
    throw CcdfError(ErrorCode::kConfig, "unreadable-config", "cannot open config: " + path);
  Config c;
  c.known_keys_ = known_keys;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw CcdfError(ErrorCode::kConfig, "bad-config-line",
                      path + ":" + std::to_string(lineno) + ": expected key = value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::from_entries(const std::map<std::string, std::string>& entries,
                            const std::vector<std::string>& known_keys) {
  Config c;
  c.known_keys_ = known_keys;
  for (const auto& [k, v] : entries) c.set(k, v);
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!known_keys_.empty() &&
      std::find(known_keys_.begin(), known_keys_.end(), key) == known_keys_.end())
    throw CcdfError(ErrorCode::kConfig, "unknown-config-key", "unknown key '" + key + "'");
  values_[key] = value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), out);
  if (ec != std::errc() || ptr != it->second.data() + it->second.size())
    bad_value(key, it->second);
  return out;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    double out = std::stod(it->second, &pos);
    if (pos != it->second.size()) bad_value(key, it->second);
    return out;
  } catch (const std::exception&) {
    bad_value(key, it->second);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  bad_value(key, it->second);
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  std::stringstream ss(it->second);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoi(part));
    } catch (const std::exception&) {
      bad_value(key, it->second);
    }
  }
  if (out.empty()) bad_value(key, it->second);
  return out;
}

std::string Config::require_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty())
    throw CcdfError(ErrorCode::kConfig, "missing-config-key", "required key '" + key + "'");
  return it->second;
}

std::int64_t Config::require_int(const std::string& key) const {
  if (!has(key))
    throw CcdfError(ErrorCode::kConfig, "missing-config-key", "required key '" + key + "'");
  return get_int(key, 0);
}

std::string Config::echo() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace ccdf::config
