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

#ifndef CCDF_TESTS_TEST_UTIL_HPP_
#define CCDF_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ccdf/types.hpp"

namespace ccdf::testutil {

// Runs fn, expecting a CcdfError; reports its tag ("" when nothing threw).
template <typename Fn>
inline std::string thrown_tag(Fn&& fn, ErrorCode* code = nullptr) {
  try {
    fn();
  } catch (const CcdfError& e) {
    if (code != nullptr) *code = e.code();
    return e.tag();
  }
  return "";
}

inline Catalog make_catalog(const std::vector<std::pair<ItemId, CategoryId>>& pairs) {
  Catalog catalog;
  for (const auto& [item, cat] : pairs) {
    catalog.item_to_category[item] = cat;
    catalog.items.push_back(item);
    catalog.categories.push_back(cat);
    catalog.items_by_category[cat].push_back(item);
  }
  catalog.finalize();
  return catalog;
}

class TempDir {
 public:
  explicit TempDir(const std::string& stem) {
    static std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (stem + "-" + std::to_string(rd() % 1000000000));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream(path, std::ios::trunc | std::ios::binary) << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace ccdf::testutil

#endif  // CCDF_TESTS_TEST_UTIL_HPP_
