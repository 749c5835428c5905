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
#include <random>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"

using namespace ccdf;
using testutil::make_catalog;
using testutil::TempDir;

TEST_CASE("compute_item_stats tallies train behaviors only") {
  std::vector<Interaction> rows = {
      {1, 10, 0, Behavior::kView, 1},     {1, 10, 0, Behavior::kView, 2},
      {1, 10, 0, Behavior::kCart, 3},     {2, 10, 0, Behavior::kFavorite, 4},
      {2, 10, 0, Behavior::kPurchase, 5}, {2, 11, 0, Behavior::kView, 6},
      {2, 10, 0, Behavior::kPurchase, 15},  // valid split, ignored
  };
  auto split = ingest::split_by_day(ingest::build_histories(rows), {10, 20, 30});
  auto stats = itemmatch::compute_item_stats(split);
  CHECK(stats.at(10).views == 2);
  CHECK(stats.at(10).carts == 1);
  CHECK(stats.at(10).favorites == 1);
  CHECK(stats.at(10).purchases == 1);
  CHECK(stats.at(11).views == 1);
  CHECK(stats.at(11).purchases == 0);
}

TEST_CASE("posterior_score applies the 1/10/100 weights with smoothing") {
  itemmatch::ItemStats s;
  s.views = 90;
  s.carts = 6;
  s.favorites = 4;
  s.purchases = 2;
  const double alpha = 10.0;
  const double denom = 90.0 + alpha;
  double want = 90.0 / denom + 10.0 * (6.0 + 4.0) / denom + 100.0 * 2.0 / denom;
  CHECK(itemmatch::posterior_score(s, alpha) == doctest::Approx(want).epsilon(1e-12));

  itemmatch::ItemStats zero;
  CHECK(itemmatch::posterior_score(zero, alpha) == 0.0);
  CHECK(testutil::thrown_tag([&] { itemmatch::posterior_score(s, -1.0); }) == "bad-alpha");
}

TEST_CASE("build_index equals the brute-force sort prefix") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    const int n_items = 50 + static_cast<int>(rng() % 500);
    const int top_n = 1 + static_cast<int>(rng() % 40);
    std::vector<std::pair<ItemId, CategoryId>> pairs;
    std::unordered_map<ItemId, itemmatch::ItemStats> stats;
    for (int i = 0; i < n_items; ++i) {
      CategoryId cat = static_cast<CategoryId>(rng() % 5);
      pairs.push_back({i, cat});
      itemmatch::ItemStats s;
      s.views = static_cast<long>(rng() % 50);
      s.carts = static_cast<long>(rng() % 10);
      s.favorites = static_cast<long>(rng() % 10);
      s.purchases = static_cast<long>(rng() % 5);
      stats[i] = s;
    }
    auto catalog = make_catalog(pairs);
    auto index = itemmatch::build_index(stats, catalog, top_n, 10.0);

    for (CategoryId cat : catalog.categories) {
      // Brute-force oracle: score everything, full sort, take the prefix.
      std::vector<std::pair<ItemId, float>> all;
      for (ItemId item : catalog.items_by_category.at(cat))
        all.push_back({item, static_cast<float>(itemmatch::posterior_score(stats[item], 10.0))});
      std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(top_n)));
      REQUIRE(index.lists.at(cat).size() == all.size());
      for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(index.lists.at(cat)[i].first == all[i].first);
        CHECK(index.lists.at(cat)[i].second == all[i].second);
      }
    }
  }
}

TEST_CASE("index save/load round-trips bitwise") {
  TempDir dir("ccdf-index");
  itemmatch::CategoryIndex index;
  index.top_n = 3;
  index.lists[5] = {{100, 1.5f}, {101, 0.25f}};
  index.lists[9] = {{102, 0.1234567f}};
  auto path = (dir / "index.bin").string();
  itemmatch::save_index(index, path);
  auto loaded = itemmatch::load_index(path);
  CHECK(loaded.top_n == 3);
  CHECK(loaded.lists == index.lists);

  auto path2 = (dir / "index2.bin").string();
  itemmatch::save_index(loaded, path2);
  CHECK(testutil::read_file(path) == testutil::read_file(path2));
}

TEST_CASE("index load failure modes") {
  TempDir dir("ccdf-index");
  itemmatch::CategoryIndex index;
  index.top_n = 1;
  index.lists[1] = {{10, 1.0f}};
  auto path = (dir / "index.bin").string();
  itemmatch::save_index(index, path);
  std::string good = testutil::read_file(path);

  ErrorCode code;
  CHECK(testutil::thrown_tag([&] { itemmatch::load_index((dir / "no.bin").string()); }, &code) ==
        "missing-index");
  CHECK(code == ErrorCode::kData);

  std::string bad = good;
  bad[0] = 'Z';
  testutil::write_file(dir / "bad.bin", bad);
  CHECK(testutil::thrown_tag([&] { itemmatch::load_index((dir / "bad.bin").string()); }) ==
        "index-magic");

  testutil::write_file(dir / "short.bin", good.substr(0, good.size() - 3));
  CHECK(testutil::thrown_tag([&] { itemmatch::load_index((dir / "short.bin").string()); }) ==
        "index-truncated");

  CHECK(testutil::thrown_tag([&] {
          itemmatch::save_index(index, (dir / "nodir" / "x.bin").string());
        }) == "index-unwritable");
}

namespace {

eval::RankedCategories ranked_fixture(std::vector<CategoryId> order) {
  eval::RankedCategories r;
  double score = static_cast<double>(order.size());
  for (CategoryId c : order) r.entries.push_back({c, score--});
  r.hr_prefix = r.entries.size();
  return r;
}

}  // namespace

TEST_CASE("retrieve_items merges round-robin in category-rank order") {
  itemmatch::CategoryIndex index;
  index.top_n = 3;
  index.lists[1] = {{11, 3.0f}, {12, 2.0f}, {13, 1.0f}};  // category a
  index.lists[2] = {{21, 3.0f}, {22, 2.0f}};              // category b

  auto ranked = ranked_fixture({1, 2});
  auto rec = itemmatch::retrieve_items(ranked, 2, index, 3, 7);
  CHECK(rec.user_id == 7);
  CHECK(rec.k_used == 2);
  REQUIRE(rec.items.size() == 3);
  // [a1, b1, a2]: alternate a, b, then back to a.
  CHECK(rec.items[0].item_id == 11);
  CHECK(rec.items[1].item_id == 21);
  CHECK(rec.items[2].item_id == 12);
  CHECK(rec.items[0].category_rank == 0);
  CHECK(rec.items[1].category_rank == 1);

  SUBCASE("exhaustion falls through to the remaining lists") {
    auto all = itemmatch::retrieve_items(ranked, 2, index, 50, 7);
    REQUIRE(all.items.size() == 5);
    CHECK(all.items[4].item_id == 13);  // category a outlives b
  }
}

TEST_CASE("retrieve_items skips empty categories without promoting past K") {
  itemmatch::CategoryIndex index;
  index.top_n = 2;
  index.lists[1] = {{11, 1.0f}};
  index.lists[3] = {{31, 1.0f}};  // ranked outside K, must never appear

  auto ranked = ranked_fixture({2, 1, 3});  // category 2 has no list
  auto rec = itemmatch::retrieve_items(ranked, 2, index, 10, 1);
  REQUIRE(rec.items.size() == 1);
  CHECK(rec.items[0].item_id == 11);
}

TEST_CASE("retrieve_items deduplicates item ids across categories") {
  itemmatch::CategoryIndex index;
  index.top_n = 2;
  index.lists[1] = {{11, 2.0f}, {12, 1.0f}};
  index.lists[2] = {{11, 2.0f}, {22, 1.0f}};  // shares item 11

  auto rec = itemmatch::retrieve_items(ranked_fixture({1, 2}), 2, index, 10, 1);
  std::vector<ItemId> got;
  for (const auto& it : rec.items) got.push_back(it.item_id);
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<ItemId>{11, 12, 22});
}

TEST_CASE("retrieve_items respects the M cap") {
  itemmatch::CategoryIndex index;
  index.top_n = 5;
  index.lists[1] = {{11, 5.0f}, {12, 4.0f}, {13, 3.0f}, {14, 2.0f}, {15, 1.0f}};
  auto rec = itemmatch::retrieve_items(ranked_fixture({1}), 1, index, 2, 1);
  CHECK(rec.items.size() == 2);
}
