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

#ifndef CCDF_TYPES_HPP_
#define CCDF_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ccdf {

using UserId = std::int64_t;
using ItemId = std::int64_t;
using CategoryId = std::int64_t;
using Timestamp = std::int64_t;

// Process exit codes double as error classes for the CLI.
enum class ErrorCode : int {
  kConfig = 2,
  kData = 3,
  kModel = 4,
  kInternal = 5,
};

// All fatal conditions carry a stable machine-readable tag ("empty-train-split",
// "missing-checkpoint", ...) next to the human message.
class CcdfError : public std::runtime_error {
 public:
  CcdfError(ErrorCode code, std::string tag, const std::string& message)
      : std::runtime_error(message), code_(code), tag_(std::move(tag)) {}

  ErrorCode code() const { return code_; }
  const std::string& tag() const { return tag_; }

 private:
  ErrorCode code_;
  std::string tag_;
};

enum class Behavior : std::uint8_t { kView = 0, kCart = 1, kFavorite = 2, kPurchase = 3 };

inline const char* behavior_string(Behavior b) {
  switch (b) {
    case Behavior::kView: return "pv";
    case Behavior::kCart: return "cart";
    case Behavior::kFavorite: return "fav";
    case Behavior::kPurchase: return "buy";
  }
  return "pv";
}

struct Interaction {
  UserId user_id = 0;
  ItemId item_id = 0;
  CategoryId category_id = 0;
  Behavior behavior = Behavior::kView;
  Timestamp timestamp = 0;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// The item universe and the (total) item -> category map C(.).
class Catalog {
 public:
  std::unordered_map<ItemId, CategoryId> item_to_category;
  std::vector<ItemId> items;            // ascending
  std::vector<CategoryId> categories;   // ascending
  std::unordered_map<CategoryId, std::vector<ItemId>> items_by_category;

  // Built once after the maps are filled; assigns dense row indices used by the
  // embedding tables.
  void finalize();

  CategoryId category_of(ItemId item) const;
  int item_index(ItemId item) const;
  int category_index(CategoryId category) const;
  bool has_item(ItemId item) const { return item_index_.count(item) > 0; }
  bool has_category(CategoryId c) const { return category_index_.count(c) > 0; }

 private:
  std::unordered_map<ItemId, int> item_index_;
  std::unordered_map<CategoryId, int> category_index_;
};

struct UserHistory {
  UserId user_id = 0;
  std::vector<Interaction> events;  // ascending by timestamp, input order on ties
};

// Half-open day boundaries: train [0, train_end), valid [train_end, valid_end),
// test [valid_end, test_end). Events at or past test_end are dropped.
struct SplitSpec {
  Timestamp train_end = 0;
  Timestamp valid_end = 0;
  Timestamp test_end = 0;

  bool valid() const { return train_end < valid_end && valid_end < test_end; }
};

}  // namespace ccdf

#endif  // CCDF_TYPES_HPP_
