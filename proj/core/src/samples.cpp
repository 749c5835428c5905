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

#include "ccdf/samples.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ccdf/rng.hpp"

namespace ccdf::samples {
namespace {

// Partial Fisher-Yates: first k entries of `pool` become a uniform draw
// without replacement; draw order is the output order.
template <typename T>
void partial_shuffle(std::vector<T>& pool, std::size_t k, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < k && i + 1 < pool.size(); ++i) {
    std::size_t j = i + uniform_index(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

int count_bucket(int s) {
  if (s <= 0) return 0;
  if (s == 1) return 1;
  if (s == 2) return 2;
  if (s <= 5) return 3;
  if (s <= 10) return 4;
  return 5;
}

int recency_bucket(std::size_t steps_back) {
  // steps_back = 1 means the most recent history event.
  if (steps_back == 1) return 1;
  if (steps_back <= 3) return 2;
  if (steps_back <= 7) return 3;
  return 4;
}

}  // namespace

void UserCategoryGraph::add(UserId user, CategoryId category, int count) {
  edges_[user][category] += count;
}

int UserCategoryGraph::count(UserId user, CategoryId category) const {
  auto it = edges_.find(user);
  if (it == edges_.end()) return 0;
  auto jt = it->second.find(category);
  return jt == it->second.end() ? 0 : jt->second;
}

const std::map<CategoryId, int>* UserCategoryGraph::user_edges(UserId user) const {
  auto it = edges_.find(user);
  return it == edges_.end() ? nullptr : &it->second;
}

UserCategoryGraph build_graph(const ingest::DaySplit& split, const Catalog& catalog) {
  UserCategoryGraph graph;
  for (const auto& [user, s] : split.users) {
    for (const auto& e : s.train) graph.add(user, catalog.category_of(e.item_id));
  }
  return graph;
}

CrossingLookup::CrossingLookup(UserId user, const UserCategoryGraph& graph,
                               std::span<const ItemId> history, const Catalog& catalog)
    : edges_(graph.user_edges(user)) {
  for (std::size_t back = 1; back <= history.size(); ++back) {
    CategoryId c = catalog.category_of(history[history.size() - back]);
    recency_bucket_.try_emplace(c, recency_bucket(back));
  }
}

CrossingTokens CrossingLookup::tokens(CategoryId category) const {
  CrossingTokens tokens;
  int s = 0;
  if (edges_ != nullptr) {
    auto it = edges_->find(category);
    if (it != edges_->end()) s = it->second;
  }
  tokens.count_token = count_bucket(s);
  auto it = recency_bucket_.find(category);
  tokens.recency_token = kCountBuckets + (it == recency_bucket_.end() ? 0 : it->second);
  return tokens;
}

CrossingTokens crossing_features(UserId user, CategoryId category,
                                 const UserCategoryGraph& graph,
                                 std::span<const ItemId> history, const Catalog& catalog) {
  return CrossingLookup(user, graph, history, catalog).tokens(category);
}

std::vector<CategoryId> sample_negatives(UserId user, const Catalog& catalog,
                                         const UserCategoryGraph& graph, int n_neg,
                                         std::mt19937_64& rng) {
  const auto* interacted = graph.user_edges(user);
  std::vector<CategoryId> pool;
  pool.reserve(catalog.categories.size());
  for (CategoryId c : catalog.categories) {
    if (interacted == nullptr || !interacted->count(c)) pool.push_back(c);
  }
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n_neg), pool.size());
  partial_shuffle(pool, take, rng);
  pool.resize(take);
  return pool;
}

std::vector<std::pair<CategoryId, int>> sample_neighbors(UserId user, CategoryId target,
                                                         const UserCategoryGraph& graph,
                                                         int n_nei, std::mt19937_64& rng) {
  const auto* interacted = graph.user_edges(user);
  std::vector<std::pair<CategoryId, int>> pool;
  if (interacted != nullptr) {
    for (const auto& [c, s] : *interacted) {
      if (c != target) pool.emplace_back(c, s);
    }
  }
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n_nei), pool.size());
  partial_shuffle(pool, take, rng);
  pool.resize(take);
  return pool;
}

std::vector<TrainingSample> make_training_samples(const ingest::DaySplit& split,
                                                  const Catalog& catalog,
                                                  const UserCategoryGraph& graph,
                                                  const SampleConfig& config) {
  if (config.history_cap < 1 || config.min_history < 1)
    throw CcdfError(ErrorCode::kConfig, "bad-sample-config",
                    "history_cap and min_history must be >= 1");
  std::vector<TrainingSample> out;
  for (const auto& [user, s] : split.users) {
    const auto& events = s.train;
    if (events.size() <= static_cast<std::size_t>(config.min_history)) continue;

    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(user)));

    // Eligible target positions: at least min_history preceding events.
    std::vector<std::size_t> positions;
    for (std::size_t p = static_cast<std::size_t>(config.min_history); p < events.size(); ++p)
      positions.push_back(p);
    std::size_t take =
        std::min<std::size_t>(static_cast<std::size_t>(config.per_user_samples), positions.size());
    partial_shuffle(positions, take, rng);
    positions.resize(take);

    for (std::size_t p : positions) {
      TrainingSample sample;
      sample.user_id = user;
      std::size_t start = p > static_cast<std::size_t>(config.history_cap)
                              ? p - static_cast<std::size_t>(config.history_cap)
                              : 0;
      for (std::size_t i = start; i < p; ++i) sample.history.push_back(events[i].item_id);
      sample.target_category = catalog.category_of(events[p].item_id);
      sample.target_count = graph.count(user, sample.target_category);
      sample.crossing =
          crossing_features(user, sample.target_category, graph, sample.history, catalog);
      sample.negatives = sample_negatives(user, catalog, graph, config.n_neg, rng);
      sample.full_softmax = sample.negatives.empty();
      sample.neighbors = sample_neighbors(user, sample.target_category, graph, config.n_nei, rng);
      out.push_back(std::move(sample));
    }
  }
  return out;
}

std::vector<EvalSample> make_eval_samples(const std::map<UserId, UserHistory>& histories,
                                          const SplitSpec& spec, EvalSplit which,
                                          const Catalog& catalog, int history_cap) {
  Timestamp lo = which == EvalSplit::kValid ? spec.train_end : spec.valid_end;
  Timestamp hi = which == EvalSplit::kValid ? spec.valid_end : spec.test_end;

  std::vector<EvalSample> out;
  for (const auto& [user, history] : histories) {
    std::set<CategoryId> seen_targets;
    const auto& events = history.events;
    for (std::size_t p = 0; p < events.size(); ++p) {
      if (events[p].timestamp < lo || events[p].timestamp >= hi) continue;
      if (p == 0) continue;  // nothing precedes the target
      CategoryId target = catalog.category_of(events[p].item_id);
      if (!seen_targets.insert(target).second) continue;  // keep the earliest

      EvalSample sample;
      sample.user_id = user;
      sample.target_category = target;
      std::size_t start = p > static_cast<std::size_t>(history_cap)
                              ? p - static_cast<std::size_t>(history_cap)
                              : 0;
      bool in_history = false;
      for (std::size_t i = start; i < p; ++i) {
        sample.history.push_back(events[i].item_id);
        if (catalog.category_of(events[i].item_id) == target) in_history = true;
      }
      sample.task = in_history ? Task::kU : Task::kN;
      out.push_back(std::move(sample));
    }
  }
  return out;
}

std::string dump_sample(const TrainingSample& sample) {
  std::ostringstream os;
  auto join = [&os](const auto& values, auto&& fmt) {
    bool first = true;
    for (const auto& v : values) {
      if (!first) os << ',';
      fmt(v);
      first = false;
    }
  };
  os << sample.user_id << '\t';
  join(sample.history, [&os](ItemId i) { os << i; });
  os << '\t' << sample.profile_token << '\t' << sample.crossing.count_token << '\t'
     << sample.crossing.recency_token << '\t' << sample.target_category << '\t'
     << sample.target_count << '\t' << (sample.positive ? 1 : 0) << '\t';
  join(sample.negatives, [&os](CategoryId c) { os << c; });
  os << '\t';
  join(sample.neighbors, [&os](const std::pair<CategoryId, int>& n) {
    os << n.first << ':' << n.second;
  });
  return os.str();
}

}  // namespace ccdf::samples
