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

#ifndef CCDF_INGEST_HPP_
#define CCDF_INGEST_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccdf/types.hpp"

namespace ccdf::ingest {

struct ParseLimits {
  // Keep only the most-active users (ties broken by smaller user id).
  std::optional<std::size_t> max_users;
  // Stop after this many valid rows.
  std::optional<std::size_t> max_rows;
};

struct ParseStats {
  std::size_t rows_read = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_skipped = 0;          // malformed rows
  std::size_t category_conflicts = 0;    // items seen with more than one category
  std::size_t rows_dropped_by_cap = 0;   // removed by max_users
};

struct ParseResult {
  std::vector<Interaction> interactions;
  Catalog catalog;
  ParseStats stats;
};

// Reads the 5-column behavior log: user_id,item_id,category_id,behavior,timestamp
// with behavior in {pv,cart,fav,buy}. Malformed rows are counted and skipped;
// more than 50% malformed rows is fatal. Items observed with several category
// ids resolve to the most frequent one (smallest id on ties) and every kept
// interaction is rewritten to that canonical category.
ParseResult parse_log(const std::string& path, const ParseLimits& limits = {});

// Per-user chronological histories; stable with respect to input order on
// timestamp ties.
std::map<UserId, UserHistory> build_histories(const std::vector<Interaction>& interactions);

struct UserSplit {
  std::vector<Interaction> train;
  std::vector<Interaction> valid;
  std::vector<Interaction> test;
};

struct DaySplit {
  std::map<UserId, UserSplit> users;
  std::size_t dropped = 0;  // events at or past test_end

  std::size_t train_size() const;
  std::size_t valid_size() const;
  std::size_t test_size() const;
};

// Assigns every event of every history to exactly one of train/valid/test by
// the half-open ranges of `spec`. An empty overall train split is fatal.
DaySplit split_by_day(const std::map<UserId, UserHistory>& histories, const SplitSpec& spec);

}  // namespace ccdf::ingest

#endif  // CCDF_INGEST_HPP_
