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

#include "ccdf/itemmatch.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

namespace ccdf::itemmatch {
namespace {

constexpr char kMagic[4] = {'C', 'I', 'D', 'X'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_le(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T read_le(std::ifstream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(value)))
    throw CcdfError(ErrorCode::kData, "index-truncated", "index file ends early");
  return value;
}

}  // namespace

std::unordered_map<ItemId, ItemStats> compute_item_stats(const ingest::DaySplit& split) {
  std::unordered_map<ItemId, ItemStats> stats;
  for (const auto& [user, s] : split.users) {
    for (const auto& e : s.train) {
      ItemStats& st = stats[e.item_id];
      switch (e.behavior) {
        case Behavior::kView: ++st.views; break;
        case Behavior::kCart: ++st.carts; break;
        case Behavior::kFavorite: ++st.favorites; break;
        case Behavior::kPurchase: ++st.purchases; break;
      }
    }
  }
  return stats;
}

double posterior_score(const ItemStats& stats, double alpha) {
  if (alpha < 0.0)
    throw CcdfError(ErrorCode::kConfig, "bad-alpha", "smoothing alpha must be >= 0");
  double denom = static_cast<double>(stats.views) + alpha;
  if (denom <= 0.0) return 0.0;
  double ctr = static_cast<double>(stats.views) / denom;
  double cvr = static_cast<double>(stats.carts + stats.favorites) / denom;
  double cpr = static_cast<double>(stats.purchases) / denom;
  return 1.0 * ctr + 10.0 * cvr + 100.0 * cpr;
}

CategoryIndex build_index(const std::unordered_map<ItemId, ItemStats>& stats,
                          const Catalog& catalog, int top_n, double alpha) {
  if (top_n < 1)
    throw CcdfError(ErrorCode::kConfig, "bad-top-n", "index N must be >= 1");
  CategoryIndex index;
  index.top_n = top_n;
  for (const auto& [cat, items] : catalog.items_by_category) {
    auto& list = index.lists[cat];
    list.reserve(items.size());
    for (ItemId item : items) {
      auto it = stats.find(item);
      double s = it == stats.end() ? 0.0 : posterior_score(it->second, alpha);
      list.emplace_back(item, static_cast<float>(s));
    }
    auto better = [](const std::pair<ItemId, float>& a, const std::pair<ItemId, float>& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    };
    if (list.size() > static_cast<std::size_t>(top_n)) {
      std::partial_sort(list.begin(), list.begin() + top_n, list.end(), better);
      list.resize(static_cast<std::size_t>(top_n));
    } else {
      std::sort(list.begin(), list.end(), better);
    }
  }
  return index;
}

void save_index(const CategoryIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CcdfError(ErrorCode::kData, "index-unwritable", "cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  write_le(out, kVersion);
  write_le(out, static_cast<std::uint32_t>(index.top_n));
  write_le(out, static_cast<std::uint64_t>(index.lists.size()));
  for (const auto& [cat, list] : index.lists) {
    write_le(out, static_cast<std::int64_t>(cat));
    write_le(out, static_cast<std::uint64_t>(list.size()));
    for (const auto& [item, score] : list) {
      write_le(out, static_cast<std::int64_t>(item));
      write_le(out, score);
    }
  }
  if (!out) throw CcdfError(ErrorCode::kData, "index-unwritable", "short write to " + path);
}

CategoryIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CcdfError(ErrorCode::kData, "missing-index", "cannot open " + path);
  char magic[4];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CcdfError(ErrorCode::kData, "index-magic", "not an index file");
  if (read_le<std::uint32_t>(in) != kVersion)
    throw CcdfError(ErrorCode::kData, "index-version", "unsupported index version");
  CategoryIndex index;
  index.top_n = static_cast<int>(read_le<std::uint32_t>(in));
  std::uint64_t n_categories = read_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < n_categories; ++i) {
    CategoryId cat = read_le<std::int64_t>(in);
    std::uint64_t len = read_le<std::uint64_t>(in);
    auto& list = index.lists[cat];
    list.reserve(len);
    for (std::uint64_t j = 0; j < len; ++j) {
      ItemId item = read_le<std::int64_t>(in);
      float score = read_le<float>(in);
      list.emplace_back(item, score);
    }
  }
  return index;
}

Recommendation retrieve_items(const eval::RankedCategories& ranked, int k,
                              const CategoryIndex& index, int m, UserId user) {
  if (k < 1 || m < 1)
    throw CcdfError(ErrorCode::kConfig, "bad-retrieval-params", "K and M must be >= 1");
  Recommendation rec;
  rec.user_id = user;
  rec.k_used = k;

  struct Cursor {
    CategoryId category;
    int category_rank;
    const std::vector<std::pair<ItemId, float>>* list;
    std::size_t next = 0;
  };
  std::vector<Cursor> cursors;
  int limit = std::min<int>(k, static_cast<int>(ranked.entries.size()));
  for (int rank = 0; rank < limit; ++rank) {
    CategoryId cat = ranked.entries[static_cast<std::size_t>(rank)].first;
    auto it = index.lists.find(cat);
    if (it == index.lists.end() || it->second.empty()) continue;  // no promotion past K
    cursors.push_back({cat, rank, &it->second, 0});
  }

  std::set<ItemId> taken;
  bool progressed = true;
  while (progressed && rec.items.size() < static_cast<std::size_t>(m)) {
    progressed = false;
    for (auto& cursor : cursors) {
      if (rec.items.size() >= static_cast<std::size_t>(m)) break;
      while (cursor.next < cursor.list->size()) {
        const auto& [item, score] = (*cursor.list)[cursor.next++];
        if (taken.insert(item).second) {
          rec.items.push_back({item, cursor.category, score, cursor.category_rank});
          progressed = true;
          break;
        }
      }
    }
  }
  return rec;
}

Recommendation recommend_pipeline(std::span<const ItemId> history, int profile_token, UserId user,
                                  const model::ModelParams& params, const Catalog& catalog,
                                  const samples::UserCategoryGraph& graph,
                                  const model::Mat& category_vectors, const CategoryIndex& index,
                                  int k, int m) {
  eval::RankedCategories ranked =
      eval::rank_categories(history, profile_token, user, params, catalog, graph,
                            category_vectors);
  return retrieve_items(ranked, k, index, m, user);
}

}  // namespace ccdf::itemmatch
