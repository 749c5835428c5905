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

#ifndef CCDF_ITEMMATCH_HPP_
#define CCDF_ITEMMATCH_HPP_

#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccdf/eval.hpp"
#include "ccdf/ingest.hpp"
#include "ccdf/types.hpp"

namespace ccdf::itemmatch {

struct ItemStats {
  long views = 0;
  long carts = 0;
  long favorites = 0;
  long purchases = 0;
};

std::unordered_map<ItemId, ItemStats> compute_item_stats(const ingest::DaySplit& split);

// Posterior weighted score 1*CTR + 10*CVR + 100*CPR with Laplace-smoothed
// log-computable proxies: CTR = views/(views+a), CVR = (carts+favs)/(views+a),
// CPR = purchases/(views+a).
double posterior_score(const ItemStats& stats, double alpha);

// Per-category top-N item lists, descending score, ascending item id on ties.
struct CategoryIndex {
  int top_n = 0;
  // float scores so the persisted form round-trips bitwise.
  std::map<CategoryId, std::vector<std::pair<ItemId, float>>> lists;
};

CategoryIndex build_index(const std::unordered_map<ItemId, ItemStats>& stats,
                          const Catalog& catalog, int top_n, double alpha);

// Binary persistence: "CIDX" magic, u32 version, u32 N, u64 category count,
// then per category (i64 id, u64 length, length x (i64 item, f32 score)),
// all little-endian.
void save_index(const CategoryIndex& index, const std::string& path);
CategoryIndex load_index(const std::string& path);

struct RecommendedItem {
  ItemId item_id = 0;
  CategoryId category_id = 0;
  float score = 0.0f;
  int category_rank = 0;  // 0-based rank of the trigger category
};

struct Recommendation {
  UserId user_id = 0;
  int k_used = 0;
  std::vector<RecommendedItem> items;  // <= M, unique item ids
};

// Round-robin merge over the top-K trigger categories in category-rank order,
// taking each category's next-best item until M items or exhaustion.
// Categories with empty lists are skipped without promoting category K+1.
Recommendation retrieve_items(const eval::RankedCategories& ranked, int k,
                              const CategoryIndex& index, int m, UserId user);

// Stage I ranking + Stage II constrained retrieval for one user.
Recommendation recommend_pipeline(std::span<const ItemId> history, int profile_token, UserId user,
                                  const model::ModelParams& params, const Catalog& catalog,
                                  const samples::UserCategoryGraph& graph,
                                  const model::Mat& category_vectors, const CategoryIndex& index,
                                  int k, int m);

}  // namespace ccdf::itemmatch

#endif  // CCDF_ITEMMATCH_HPP_
