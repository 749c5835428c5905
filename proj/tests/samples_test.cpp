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
#include <cmath>
#include <map>
#include <set>

#include "ccdf/rng.hpp"
#include "ccdf/synth.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ccdf;
using testutil::make_catalog;

namespace {

// Train-only fixture: user 1 interacts with categories 100 (3x) and 101 (1x).
ingest::DaySplit small_split() {
  std::vector<Interaction> rows = {
      {1, 10, 100, Behavior::kView, 1},
      {1, 10, 100, Behavior::kView, 2},
      {1, 11, 101, Behavior::kView, 3},
      {1, 12, 100, Behavior::kView, 4},
      {2, 13, 102, Behavior::kView, 5},
  };
  return ingest::split_by_day(ingest::build_histories(rows), {10, 20, 30});
}

Catalog small_catalog() {
  return make_catalog({{10, 100}, {11, 101}, {12, 100}, {13, 102}});
}

}  // namespace

TEST_CASE("build_graph tallies train events per (user, category)") {
  auto catalog = small_catalog();
  auto graph = samples::build_graph(small_split(), catalog);
  CHECK(graph.count(1, 100) == 3);
  CHECK(graph.count(1, 101) == 1);
  CHECK(graph.count(1, 102) == 0);
  CHECK(graph.count(2, 102) == 1);
  CHECK(graph.count(99, 100) == 0);
  CHECK(graph.user_edges(99) == nullptr);
}

TEST_CASE("crossing count buckets follow {0,1,2,3-5,6-10,>10}") {
  auto catalog = make_catalog({{10, 100}});
  const std::vector<std::pair<int, int>> cases = {
      {0, 0}, {1, 1}, {2, 2}, {3, 3}, {5, 3}, {6, 4}, {10, 4}, {11, 5}, {50, 5}};
  for (const auto& [count, want] : cases) {
    samples::UserCategoryGraph graph;
    if (count > 0) graph.add(1, 100, count);
    auto tokens = samples::crossing_features(1, 100, graph, {}, catalog);
    CHECK_MESSAGE(tokens.count_token == want, "count=", count);
  }
}

TEST_CASE("crossing recency buckets follow {absent, last-1, last-2..3, last-4..7, older}") {
  // History is 9 distinct categories, most recent last.
  std::vector<std::pair<ItemId, CategoryId>> pairs;
  std::vector<ItemId> history;
  for (int i = 0; i < 9; ++i) {
    pairs.push_back({10 + i, 100 + i});
    history.push_back(10 + i);
  }
  auto catalog = make_catalog(pairs);
  samples::UserCategoryGraph graph;

  auto recency = [&](CategoryId c) {
    return samples::crossing_features(1, c, graph, history, catalog).recency_token -
           samples::kCountBuckets;
  };
  CHECK(recency(999) == 0);  // absent
  CHECK(recency(108) == 1);  // most recent
  CHECK(recency(107) == 2);
  CHECK(recency(106) == 2);
  CHECK(recency(105) == 3);
  CHECK(recency(102) == 3);
  CHECK(recency(101) == 4);
  CHECK(recency(100) == 4);
}

TEST_CASE("crossing lookup matches one-off crossing features") {
  synth::CyclicConfig cfg;
  cfg.users = 5;
  auto rows = synth::cyclic_dataset(cfg);
  auto histories = ingest::build_histories(rows);
  auto split = ingest::split_by_day(histories, {7 * synth::kDay, 9 * synth::kDay,
                                                10 * synth::kDay + 1});
  Catalog catalog;
  for (const auto& r : rows) {
    if (catalog.item_to_category.try_emplace(r.item_id, r.category_id).second) {
      catalog.items.push_back(r.item_id);
      catalog.categories.push_back(r.category_id);
      catalog.items_by_category[r.category_id].push_back(r.item_id);
    }
  }
  catalog.finalize();
  auto graph = samples::build_graph(split, catalog);

  std::vector<ItemId> history;
  for (const auto& e : split.users.at(1).train) history.push_back(e.item_id);
  samples::CrossingLookup lookup(1, graph, history, catalog);
  for (CategoryId c : catalog.categories)
    CHECK(lookup.tokens(c) == samples::crossing_features(1, c, graph, history, catalog));
}

TEST_CASE("sample_negatives draws only non-interacted categories") {
  std::vector<std::pair<ItemId, CategoryId>> pairs;
  for (int c = 0; c < 50; ++c) pairs.push_back({c, c});
  auto catalog = make_catalog(pairs);
  samples::UserCategoryGraph graph;
  graph.add(1, 3);
  graph.add(1, 17);

  std::mt19937_64 rng(1234);
  auto negs = samples::sample_negatives(1, catalog, graph, 10, rng);
  CHECK(negs.size() == 10);
  std::set<CategoryId> unique(negs.begin(), negs.end());
  CHECK(unique.size() == 10);
  CHECK(unique.count(3) == 0);
  CHECK(unique.count(17) == 0);

  SUBCASE("requesting more than the pool returns the whole pool") {
    auto all = samples::sample_negatives(1, catalog, graph, 500, rng);
    CHECK(all.size() == 48);
  }
  SUBCASE("empty pool yields an empty list") {
    samples::UserCategoryGraph full;
    for (int c = 0; c < 50; ++c) full.add(1, c);
    CHECK(samples::sample_negatives(1, catalog, full, 10, rng).empty());
  }
}

TEST_CASE("negative sampling is uniform over the pool (3-sigma)") {
  std::vector<std::pair<ItemId, CategoryId>> pairs;
  for (int c = 0; c < 20; ++c) pairs.push_back({c, c});
  auto catalog = make_catalog(pairs);
  samples::UserCategoryGraph graph;
  graph.add(1, 0);  // pool = 19 categories

  const int trials = 20000;
  std::map<CategoryId, int> counts;
  std::mt19937_64 rng(99);
  for (int t = 0; t < trials; ++t)
    for (CategoryId c : samples::sample_negatives(1, catalog, graph, 1, rng)) ++counts[c];

  const double p = 1.0 / 19.0;
  const double mean = trials * p;
  const double sigma = std::sqrt(trials * p * (1 - p));
  for (CategoryId c = 1; c < 20; ++c)
    CHECK(std::abs(counts[c] - mean) <= 3.0 * sigma);
}

TEST_CASE("sample_neighbors excludes the target and carries counts") {
  samples::UserCategoryGraph graph;
  graph.add(1, 100, 3);
  graph.add(1, 101, 1);
  graph.add(1, 102, 7);
  std::mt19937_64 rng(5);
  auto neighbors = samples::sample_neighbors(1, 100, graph, 5, rng);
  CHECK(neighbors.size() == 2);
  for (const auto& [cat, count] : neighbors) {
    CHECK(cat != 100);
    CHECK(count == graph.count(1, cat));
  }
  CHECK(samples::sample_neighbors(1, 100, graph, 1, rng).size() == 1);
}

TEST_CASE("make_training_samples is deterministic and respects the window") {
  auto catalog = small_catalog();
  auto split = small_split();
  auto graph = samples::build_graph(split, catalog);
  samples::SampleConfig cfg;
  cfg.min_history = 1;
  cfg.history_cap = 2;
  cfg.per_user_samples = 3;
  cfg.seed = 42;

  auto a = samples::make_training_samples(split, catalog, graph, cfg);
  auto b = samples::make_training_samples(split, catalog, graph, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(samples::dump_sample(a[i]) == samples::dump_sample(b[i]));

  // User 1 has positions {1,2,3} eligible; user 2 has none.
  CHECK(a.size() == 3);
  for (const auto& s : a) {
    CHECK(s.user_id == 1);
    CHECK(s.history.size() <= 2);
    CHECK(s.history.size() >= 1);
    CHECK(s.target_count == graph.count(1, s.target_category));
    for (CategoryId n : s.negatives) CHECK(graph.count(1, n) == 0);
  }
}

TEST_CASE("training samples flag the full-softmax fallback") {
  // Both users touch every category, so no negatives exist anywhere.
  std::vector<Interaction> rows = {
      {1, 10, 100, Behavior::kView, 1},
      {1, 11, 101, Behavior::kView, 2},
      {1, 10, 100, Behavior::kView, 3},
      {1, 11, 101, Behavior::kView, 4},
  };
  auto catalog = make_catalog({{10, 100}, {11, 101}});
  auto split = ingest::split_by_day(ingest::build_histories(rows), {10, 20, 30});
  auto graph = samples::build_graph(split, catalog);
  samples::SampleConfig cfg;
  cfg.min_history = 1;
  cfg.per_user_samples = 2;
  auto out = samples::make_training_samples(split, catalog, graph, cfg);
  REQUIRE(!out.empty());
  for (const auto& s : out) {
    CHECK(s.negatives.empty());
    CHECK(s.full_softmax);
  }
}

TEST_CASE("make_eval_samples dedups targets and assigns tasks from the window") {
  // Train: categories 100,101. Test events: 100 (U), 102 (N), then 100 again
  // (deduplicated).
  std::vector<Interaction> rows = {
      {1, 10, 100, Behavior::kView, 1},
      {1, 11, 101, Behavior::kView, 2},
      {1, 12, 100, Behavior::kView, 21},
      {1, 13, 102, Behavior::kView, 22},
      {1, 14, 100, Behavior::kView, 23},
  };
  auto catalog = make_catalog({{10, 100}, {11, 101}, {12, 100}, {13, 102}, {14, 100}});
  auto histories = ingest::build_histories(rows);
  auto samples_out =
      samples::make_eval_samples(histories, {10, 20, 30}, samples::EvalSplit::kTest, catalog, 20);
  REQUIRE(samples_out.size() == 2);
  CHECK(samples_out[0].target_category == 100);
  CHECK(samples_out[0].task == samples::Task::kU);
  CHECK(samples_out[0].history == std::vector<ItemId>{10, 11});
  CHECK(samples_out[1].target_category == 102);
  CHECK(samples_out[1].task == samples::Task::kN);
  CHECK(samples_out[1].history == std::vector<ItemId>{10, 11, 12});
}

TEST_CASE("make_eval_samples truncates history to T and skips empty histories") {
  std::vector<Interaction> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({1, 10 + i, 100, Behavior::kView, 1 + i});
  rows.push_back({1, 50, 101, Behavior::kView, 25 + 30});  // test target
  rows.push_back({2, 60, 102, Behavior::kView, 45});       // test event, empty history
  std::vector<std::pair<ItemId, CategoryId>> pairs = {{50, 101}, {60, 102}};
  for (int i = 0; i < 30; ++i) pairs.push_back({10 + i, 100});
  auto catalog = make_catalog(pairs);
  auto histories = ingest::build_histories(rows);
  auto out =
      samples::make_eval_samples(histories, {31, 40, 60}, samples::EvalSplit::kTest, catalog, 20);
  REQUIRE(out.size() == 1);
  CHECK(out[0].user_id == 1);
  CHECK(out[0].history.size() == 20);
  CHECK(out[0].history.front() == 20);  // last 20 of 30 items
  CHECK(out[0].history.back() == 39);
}

TEST_CASE("valid and test windows select disjoint targets") {
  std::vector<Interaction> rows = {
      {1, 10, 100, Behavior::kView, 1},
      {1, 11, 101, Behavior::kView, 12},  // valid
      {1, 12, 102, Behavior::kView, 22},  // test
  };
  auto catalog = make_catalog({{10, 100}, {11, 101}, {12, 102}});
  auto histories = ingest::build_histories(rows);
  auto valid =
      samples::make_eval_samples(histories, {10, 20, 30}, samples::EvalSplit::kValid, catalog, 20);
  auto test =
      samples::make_eval_samples(histories, {10, 20, 30}, samples::EvalSplit::kTest, catalog, 20);
  REQUIRE(valid.size() == 1);
  REQUIRE(test.size() == 1);
  CHECK(valid[0].target_category == 101);
  CHECK(test[0].target_category == 102);
  CHECK(test[0].history == std::vector<ItemId>{10, 11});
}

TEST_CASE("dump_sample format is stable") {
  samples::TrainingSample s;
  s.user_id = 7;
  s.history = {10, 11};
  s.profile_token = 0;
  s.crossing = {2, 7};
  s.target_category = 100;
  s.target_count = 2;
  s.negatives = {102, 103};
  s.neighbors = {{101, 1}};
  CHECK(samples::dump_sample(s) == "7\t10,11\t0\t2\t7\t100\t2\t1\t102,103\t101:1");
}
