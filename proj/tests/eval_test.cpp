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

#include "ccdf/eval.hpp"

#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"

using namespace ccdf;
using testutil::make_catalog;

namespace {

samples::EvalSample make_sample(CategoryId target, samples::Task task) {
  samples::EvalSample s;
  s.user_id = 1;
  s.target_category = target;
  s.task = task;
  return s;
}

eval::RankedCategories ranking(std::vector<CategoryId> order, std::size_t hr_prefix) {
  eval::RankedCategories r;
  double score = static_cast<double>(order.size());
  for (CategoryId c : order) r.entries.push_back({c, score--});
  r.hr_prefix = hr_prefix;
  return r;
}

}  // namespace

TEST_CASE("statistics baseline ranks history by count, then recency, then id") {
  // History [A, B, A, C] with A=1, B=2, C=3: A leads on count; C beats B on
  // recency. Unseen categories follow by ascending id, outside the hr prefix.
  auto catalog =
      make_catalog({{10, 1}, {11, 2}, {12, 1}, {13, 3}, {14, 4}, {15, 5}});
  std::vector<ItemId> history = {10, 11, 12, 13};
  auto ranked = eval::statistics_baseline(history, catalog);

  REQUIRE(ranked.entries.size() == 5);
  CHECK(ranked.entries[0].first == 1);
  CHECK(ranked.entries[1].first == 3);
  CHECK(ranked.entries[2].first == 2);
  CHECK(ranked.entries[3].first == 4);
  CHECK(ranked.entries[4].first == 5);
  CHECK(ranked.hr_prefix == 3);
  // Scores are strictly descending over the historical prefix.
  CHECK(ranked.entries[0].second > ranked.entries[1].second);
  CHECK(ranked.entries[1].second > ranked.entries[2].second);
}

TEST_CASE("statistics baseline breaks full ties by ascending category id") {
  auto catalog = make_catalog({{10, 7}, {11, 3}});
  // Both categories appear once; recency orders 3 (item 11, later) above 7.
  auto ranked = eval::statistics_baseline(std::vector<ItemId>{10, 11}, catalog);
  CHECK(ranked.entries[0].first == 3);
  CHECK(ranked.entries[1].first == 7);
}

TEST_CASE("hr_at_k counts hits inside min(K, hr_prefix)") {
  std::vector<samples::EvalSample> s = {
      make_sample(1, samples::Task::kU),   // rank 0
      make_sample(3, samples::Task::kU),   // rank 2
      make_sample(4, samples::Task::kN),   // rank 3, outside prefix
  };
  std::vector<eval::RankedCategories> r = {
      ranking({1, 2, 3, 4}, 4),
      ranking({1, 2, 3, 4}, 4),
      ranking({1, 2, 3, 4}, 2),  // prefix cuts the hit off
  };

  CHECK(*eval::hr_at_k(r, s, 1, std::nullopt) == doctest::Approx(1.0 / 3.0));
  CHECK(*eval::hr_at_k(r, s, 3, std::nullopt) == doctest::Approx(2.0 / 3.0));
  CHECK(*eval::hr_at_k(r, s, 10, std::nullopt) == doctest::Approx(2.0 / 3.0));
  CHECK(*eval::hr_at_k(r, s, 10, samples::Task::kU) == doctest::Approx(1.0));
  CHECK(*eval::hr_at_k(r, s, 10, samples::Task::kN) == doctest::Approx(0.0));

  std::vector<samples::EvalSample> none;
  std::vector<eval::RankedCategories> empty;
  CHECK(!eval::hr_at_k(empty, none, 5, std::nullopt).has_value());
}

TEST_CASE("hr is monotone in K") {
  std::vector<samples::EvalSample> s;
  std::vector<eval::RankedCategories> r;
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    std::vector<CategoryId> order = {0, 1, 2, 3, 4, 5, 6, 7};
    for (std::size_t j = order.size(); j > 1; --j)
      std::swap(order[j - 1], order[rng() % j]);
    s.push_back(make_sample(static_cast<CategoryId>(rng() % 8), samples::Task::kU));
    r.push_back(ranking(order, 8));
  }
  double prev = 0.0;
  for (int k : {1, 2, 3, 5, 8}) {
    double hr = *eval::hr_at_k(r, s, k, std::nullopt);
    CHECK(hr >= prev);
    prev = hr;
  }
}

TEST_CASE("report_from_rankings fills both tasks") {
  std::vector<samples::EvalSample> s = {
      make_sample(1, samples::Task::kU),
      make_sample(2, samples::Task::kN),
      make_sample(9, samples::Task::kN),
  };
  std::vector<eval::RankedCategories> r = {
      ranking({1, 2, 3}, 3), ranking({1, 2, 3}, 3), ranking({1, 2, 3}, 3)};
  std::vector<int> ks = {1, 2};
  auto report = eval::report_from_rankings(r, s, ks);
  CHECK(report.samples == 3);
  CHECK(report.u.count == 1);
  CHECK(report.n.count == 2);
  CHECK(report.u.hr.at(1) == doctest::Approx(1.0));
  CHECK(report.n.hr.at(2) == doctest::Approx(0.5));
}

TEST_CASE("rank_categories breaks score ties by ascending id") {
  // Zeroed parameters score every category identically.
  model::HyperParams hp;
  hp.history_cap = 4;
  hp.d_model = 4;
  hp.d_cat_in = 4;
  hp.d_cross = 2;
  hp.d_prof = 2;
  hp.heads = 2;
  hp.d_head = 2;
  hp.d_match = 4;
  hp.ffn_hidden = 4;
  auto catalog = make_catalog({{10, 30}, {11, 20}, {12, 40}, {13, 10}});
  auto params = model::init_params(hp, 4, 4, 3);
  params.cross_emb.setZero();
  params.wide_w.setZero();
  params.wide_b = 0.0;
  samples::UserCategoryGraph graph;
  auto cat_vectors = model::all_category_vectors(params);
  auto ranked =
      eval::rank_categories(std::vector<ItemId>{10}, 0, 1, params, catalog, graph, cat_vectors);
  REQUIRE(ranked.entries.size() == 4);
  CHECK(ranked.entries[0].first == 10);
  CHECK(ranked.entries[1].first == 20);
  CHECK(ranked.entries[2].first == 30);
  CHECK(ranked.entries[3].first == 40);
  CHECK(ranked.hr_prefix == 4);  // the model ranking scores every category
}

TEST_CASE("diversity_report averages exposed and novel categories") {
  std::map<UserId, std::vector<CategoryId>> recommended = {
      {1, {10, 10, 20, 30}},  // 3 distinct, 2 novel
      {2, {10, 20}},          // 2 distinct, 0 novel
  };
  std::map<UserId, std::set<CategoryId>> history = {
      {1, {10}},
      {2, {10, 20, 30}},
  };
  auto report = eval::diversity_report(recommended, history);
  CHECK(report.users == 2);
  CHECK(report.avg_exposed_categories == doctest::Approx(2.5));
  CHECK(report.avg_exposed_n_categories == doctest::Approx(1.0));

  CHECK(eval::diversity_report({}, {}).users == 0);
}
