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

#include "ccdf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <string_view>
#include <utility>

namespace ccdf {

void Catalog::finalize() {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
  item_index_.clear();
  category_index_.clear();
  for (std::size_t i = 0; i < items.size(); ++i) item_index_[items[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < categories.size(); ++i)
    category_index_[categories[i]] = static_cast<int>(i);
  for (auto& [cat, list] : items_by_category) std::sort(list.begin(), list.end());
}

CategoryId Catalog::category_of(ItemId item) const {
  auto it = item_to_category.find(item);
  if (it == item_to_category.end())
    throw CcdfError(ErrorCode::kData, "unknown-item",
                    "item " + std::to_string(item) + " not in catalog");
  return it->second;
}

int Catalog::item_index(ItemId item) const {
  auto it = item_index_.find(item);
  if (it == item_index_.end())
    throw CcdfError(ErrorCode::kData, "unknown-item",
                    "item " + std::to_string(item) + " not in catalog");
  return it->second;
}

int Catalog::category_index(CategoryId category) const {
  auto it = category_index_.find(category);
  if (it == category_index_.end())
    throw CcdfError(ErrorCode::kData, "unknown-category",
                    "category " + std::to_string(category) + " not in catalog");
  return it->second;
}

}  // namespace ccdf

namespace ccdf::ingest {
namespace {

bool parse_int(std::string_view field, std::int64_t* out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

bool parse_behavior(std::string_view field, Behavior* out) {
  if (field == "pv") {
    *out = Behavior::kView;
  } else if (field == "cart") {
    *out = Behavior::kCart;
  } else if (field == "fav") {
    *out = Behavior::kFavorite;
  } else if (field == "buy") {
    *out = Behavior::kPurchase;
  } else {
    return false;
  }
  return true;
}

// Returns false on any malformed field.
bool parse_row(std::string_view line, Interaction* out) {
  std::string_view fields[5];
  std::size_t n = 0;
  while (n < 5) {
    std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      fields[n++] = line;
      line = {};
      break;
    }
    fields[n++] = line.substr(0, comma);
    line.remove_prefix(comma + 1);
  }
  if (n != 5 || !line.empty()) return false;
  if (!parse_int(fields[0], &out->user_id)) return false;
  if (!parse_int(fields[1], &out->item_id)) return false;
  if (!parse_int(fields[2], &out->category_id)) return false;
  if (!parse_behavior(fields[3], &out->behavior)) return false;
  if (!parse_int(fields[4], &out->timestamp)) return false;
  if (out->user_id < 0 || out->item_id < 0 || out->category_id < 0 || out->timestamp <= 0)
    return false;
  return true;
}

}  // namespace

ParseResult parse_log(const std::string& path, const ParseLimits& limits) {
  std::ifstream in(path);
  if (!in)
    throw CcdfError(ErrorCode::kData, "unreadable-file", "cannot open log file: " + path);

  ParseResult result;
  auto& rows = result.interactions;
  ParseStats& stats = result.stats;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++stats.rows_read;
    Interaction row;
    if (!parse_row(line, &row)) {
      ++stats.rows_skipped;
      continue;
    }
    rows.push_back(row);
    ++stats.rows_kept;
    if (limits.max_rows && stats.rows_kept >= *limits.max_rows) break;
  }
  if (stats.rows_read > 0 && stats.rows_skipped * 2 > stats.rows_read)
    throw CcdfError(ErrorCode::kData, "mostly-malformed",
                    "more than 50% malformed rows; wrong file?");

  if (limits.max_users) {
    std::map<UserId, std::size_t> activity;
    for (const auto& r : rows) ++activity[r.user_id];
    if (activity.size() > *limits.max_users) {
      // Most interactions first, smaller user id on ties.
      std::vector<std::pair<UserId, std::size_t>> ranked(activity.begin(), activity.end());
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      ranked.resize(*limits.max_users);
      std::unordered_map<UserId, bool> keep;
      for (const auto& [u, _] : ranked) keep[u] = true;
      std::size_t before = rows.size();
      std::erase_if(rows, [&](const Interaction& r) { return !keep.count(r.user_id); });
      stats.rows_dropped_by_cap = before - rows.size();
    }
  }

  // Resolve the item -> category map by majority vote, smallest category id on
  // ties, then rewrite interactions to the canonical category.
  std::unordered_map<ItemId, std::map<CategoryId, std::size_t>> votes;
  for (const auto& r : rows) ++votes[r.item_id][r.category_id];

  Catalog& catalog = result.catalog;
  for (const auto& [item, by_cat] : votes) {
    CategoryId winner = by_cat.begin()->first;
    std::size_t best = by_cat.begin()->second;
    for (const auto& [cat, n] : by_cat) {
      if (n > best) {
        winner = cat;
        best = n;
      }
    }
    if (by_cat.size() > 1) ++stats.category_conflicts;
    catalog.item_to_category[item] = winner;
  }
  for (auto& r : rows) r.category_id = catalog.item_to_category.at(r.item_id);

  for (const auto& [item, cat] : catalog.item_to_category) {
    catalog.items.push_back(item);
    catalog.categories.push_back(cat);
    catalog.items_by_category[cat].push_back(item);
  }
  catalog.finalize();
  return result;
}

std::map<UserId, UserHistory> build_histories(const std::vector<Interaction>& interactions) {
  std::map<UserId, UserHistory> histories;
  for (const auto& r : interactions) {
    auto& h = histories[r.user_id];
    h.user_id = r.user_id;
    h.events.push_back(r);
  }
  for (auto& [user, h] : histories) {
    std::stable_sort(h.events.begin(), h.events.end(),
                     [](const Interaction& a, const Interaction& b) {
                       return a.timestamp < b.timestamp;
                     });
  }
  return histories;
}

std::size_t DaySplit::train_size() const {
  std::size_t n = 0;
  for (const auto& [u, s] : users) n += s.train.size();
  return n;
}

std::size_t DaySplit::valid_size() const {
  std::size_t n = 0;
  for (const auto& [u, s] : users) n += s.valid.size();
  return n;
}

std::size_t DaySplit::test_size() const {
  std::size_t n = 0;
  for (const auto& [u, s] : users) n += s.test.size();
  return n;
}

DaySplit split_by_day(const std::map<UserId, UserHistory>& histories, const SplitSpec& spec) {
  if (!spec.valid())
    throw CcdfError(ErrorCode::kConfig, "bad-split-spec",
                    "split boundaries must satisfy train_end < valid_end < test_end");
  DaySplit split;
  for (const auto& [user, history] : histories) {
    UserSplit& s = split.users[user];
    for (const auto& e : history.events) {
      if (e.timestamp < spec.train_end) {
        s.train.push_back(e);
      } else if (e.timestamp < spec.valid_end) {
        s.valid.push_back(e);
      } else if (e.timestamp < spec.test_end) {
        s.test.push_back(e);
      } else {
        ++split.dropped;
      }
    }
  }
  if (split.train_size() == 0)
    throw CcdfError(ErrorCode::kData, "empty-train-split",
                    "no events fall before train_end");
  return split;
}

}  // namespace ccdf::ingest
