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

#ifndef CCDF_SAMPLES_HPP_
#define CCDF_SAMPLES_HPP_

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccdf/ingest.hpp"
#include "ccdf/types.hpp"

namespace ccdf::samples {

// Bipartite user <-> category interaction graph. s_uc counts train events of
// user u whose item has category c.
class UserCategoryGraph {
 public:
  void add(UserId user, CategoryId category, int count = 1);
  int count(UserId user, CategoryId category) const;  // 0 when the edge is absent
  // Interacted categories of a user with counts, ordered by category id;
  // nullptr for unknown users.
  const std::map<CategoryId, int>* user_edges(UserId user) const;

  const std::map<UserId, std::map<CategoryId, int>>& edges() const { return edges_; }

 private:
  std::map<UserId, std::map<CategoryId, int>> edges_;
};

UserCategoryGraph build_graph(const ingest::DaySplit& split, const Catalog& catalog);

// Crossing feature vocabulary: count buckets {0,1,2,3-5,6-10,>10} followed by
// recency buckets {absent, last-1, last-2..3, last-4..7, older}. Token ids
// index one shared embedding table.
inline constexpr int kCountBuckets = 6;
inline constexpr int kRecencyBuckets = 5;
inline constexpr int kCrossingVocab = kCountBuckets + kRecencyBuckets;
inline constexpr int kProfileVocab = 1;  // single "unknown" profile token

struct CrossingTokens {
  int count_token = 0;
  int recency_token = kCountBuckets;

  friend bool operator==(const CrossingTokens&, const CrossingTokens&) = default;
};

CrossingTokens crossing_features(UserId user, CategoryId category,
                                 const UserCategoryGraph& graph,
                                 std::span<const ItemId> history, const Catalog& catalog);

// Precomputed crossing-token source for scoring one user against many
// categories: one history scan instead of one per category.
class CrossingLookup {
 public:
  CrossingLookup(UserId user, const UserCategoryGraph& graph, std::span<const ItemId> history,
                 const Catalog& catalog);
  CrossingTokens tokens(CategoryId category) const;

 private:
  const std::map<CategoryId, int>* edges_;
  std::map<CategoryId, int> recency_bucket_;  // categories present in the history
};

struct TrainingSample {
  UserId user_id = 0;
  std::vector<ItemId> history;  // <= T items, chronological
  int profile_token = 0;
  CrossingTokens crossing;  // for (u, c_t)
  CategoryId target_category = 0;
  int target_count = 0;  // s_uc_t
  bool positive = true;
  std::vector<CategoryId> negatives;
  std::vector<std::pair<CategoryId, int>> neighbors;  // (category, s_uc)
  // The user had interacted with every category, so the negative pool was
  // empty; the loss falls back to the full softmax over all categories.
  bool full_softmax = false;
};

enum class Task { kU, kN };

struct EvalSample {
  UserId user_id = 0;
  std::vector<ItemId> history;  // <= T items strictly before the target event
  CategoryId target_category = 0;
  Task task = Task::kU;
};

struct SampleConfig {
  int history_cap = 20;       // T
  int per_user_samples = 5;   // S
  int min_history = 3;        // h_min
  int n_neg = 500;
  int n_nei = 5;
  std::uint64_t seed = 0;
};

// Draws up to S target positions per user uniformly without replacement among
// positions with at least h_min preceding train events, then materializes the
// full sample (history window, crossing tokens, negatives, neighbors).
// Deterministic: each user gets an independent generator seeded from
// (seed, user_id).
std::vector<TrainingSample> make_training_samples(const ingest::DaySplit& split,
                                                  const Catalog& catalog,
                                                  const UserCategoryGraph& graph,
                                                  const SampleConfig& config);

enum class EvalSplit { kValid, kTest };

// One sample per split event, deduplicated per (user, target category) keeping
// the earliest; history is the last <= T events strictly before the target.
// Events with no preceding history are skipped.
std::vector<EvalSample> make_eval_samples(const std::map<UserId, UserHistory>& histories,
                                          const SplitSpec& spec, EvalSplit which,
                                          const Catalog& catalog, int history_cap);

// Uniform sample without replacement from the non-interacted category pool;
// empty pool yields an empty list (caller flags the sample).
std::vector<CategoryId> sample_negatives(UserId user, const Catalog& catalog,
                                         const UserCategoryGraph& graph, int n_neg,
                                         std::mt19937_64& rng);

// Up to n_nei categories from per_user[u] \ {target}, each with its s_uc.
std::vector<std::pair<CategoryId, int>> sample_neighbors(UserId user, CategoryId target,
                                                         const UserCategoryGraph& graph,
                                                         int n_nei, std::mt19937_64& rng);

// Tab-separated dump, one sample per line; used by golden tests.
std::string dump_sample(const TrainingSample& sample);

}  // namespace ccdf::samples

#endif  // CCDF_SAMPLES_HPP_
