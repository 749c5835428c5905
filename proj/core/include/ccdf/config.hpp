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

#ifndef CCDF_CONFIG_HPP_
#define CCDF_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ccdf/types.hpp"

namespace ccdf::config {

// Flat dotted-key/value configuration ("train.margin = 0.4"). '#' starts a
// comment. Unknown keys are rejected so typos fail fast; command-line
// overrides go through set().
class Config {
 public:
  static Config from_file(const std::string& path, const std::vector<std::string>& known_keys);
  static Config from_entries(const std::map<std::string, std::string>& entries,
                             const std::vector<std::string>& known_keys);

  void set(const std::string& key, const std::string& value);  // validates the key

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated integer list.
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;

  std::string require_string(const std::string& key) const;
  std::int64_t require_int(const std::string& key) const;

  // Fully-resolved "key = value" lines, sorted by key; written next to every
  // command's outputs.
  std::string echo() const;

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> known_keys_;
};

}  // namespace ccdf::config

#endif  // CCDF_CONFIG_HPP_
