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
//
// Microbenchmarks for the hot paths: attention, full-category scoring, the
// training step, and index construction.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ccdf/itemmatch.hpp"
#include "ccdf/model.hpp"
#include "ccdf/samples.hpp"
#include "ccdf/train.hpp"
#include "ccdf/types.hpp"

namespace {

using namespace ccdf;
using model::Mat;

struct Fixture {
  model::HyperParams hp;
  Catalog catalog;
  samples::UserCategoryGraph graph;
  model::ModelParams params;
  std::vector<ItemId> history;

  explicit Fixture(int n_categories = 200, int items_per_category = 20) {
    for (int c = 0; c < n_categories; ++c) {
      for (int i = 0; i < items_per_category; ++i) {
        ItemId item = c * items_per_category + i;
        catalog.item_to_category[item] = c;
        catalog.items.push_back(item);
        catalog.categories.push_back(c);
        catalog.items_by_category[c].push_back(item);
      }
    }
    catalog.finalize();
    params = model::init_params(hp, static_cast<int>(catalog.items.size()), n_categories, 1);
    std::mt19937_64 rng(2);
    for (int i = 0; i < hp.history_cap; ++i) {
      ItemId item = static_cast<ItemId>(rng() % catalog.items.size());
      history.push_back(item);
      graph.add(1, catalog.category_of(item));
    }
  }
};

void BM_MhsaForward(benchmark::State& state) {
  Fixture fx;
  Mat x(state.range(0), fx.hp.d_model);
  std::mt19937_64 rng(3);
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      x(r, c) = static_cast<double>(rng() % 1000) / 1000.0 - 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(model::mhsa_forward(x, fx.params));
}
BENCHMARK(BM_MhsaForward)->Arg(5)->Arg(20);

void BM_ScoreAllCategories(benchmark::State& state) {
  Fixture fx;
  Mat cat_vectors = model::all_category_vectors(fx.params);
  for (auto _ : state) {
    auto scores = model::score_categories(fx.history, 0, 1, fx.catalog.categories, fx.params,
                                          fx.catalog, fx.graph, cat_vectors);
    benchmark::DoNotOptimize(scores);
  }
}
BENCHMARK(BM_ScoreAllCategories);

void BM_BackwardBatch(benchmark::State& state) {
  Fixture fx;
  std::mt19937_64 rng(7);
  std::vector<samples::TrainingSample> batch;
  for (int b = 0; b < static_cast<int>(state.range(0)); ++b) {
    samples::TrainingSample s;
    s.user_id = 1;
    s.history = fx.history;
    s.target_category = fx.catalog.category_of(fx.history[0]);
    s.target_count = fx.graph.count(1, s.target_category);
    auto negs = samples::sample_negatives(1, fx.catalog, fx.graph, 100, rng);
    s.negatives = std::move(negs);
    s.neighbors = samples::sample_neighbors(1, s.target_category, fx.graph, 5, rng);
    batch.push_back(std::move(s));
  }
  train::TrainConfig cfg;
  for (auto _ : state) {
    auto result = train::backward(batch, fx.params, fx.catalog, fx.graph, cfg);
    benchmark::DoNotOptimize(result.loss);
  }
}
BENCHMARK(BM_BackwardBatch)->Arg(1)->Arg(16);

void BM_BuildIndex(benchmark::State& state) {
  Fixture fx(50, static_cast<int>(state.range(0)));
  std::unordered_map<ItemId, itemmatch::ItemStats> stats;
  std::mt19937_64 rng(9);
  for (ItemId item : fx.catalog.items) {
    itemmatch::ItemStats s;
    s.views = static_cast<long>(rng() % 500);
    s.carts = static_cast<long>(rng() % 30);
    s.favorites = static_cast<long>(rng() % 30);
    s.purchases = static_cast<long>(rng() % 10);
    stats[item] = s;
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(itemmatch::build_index(stats, fx.catalog, 300, 10.0));
}
BENCHMARK(BM_BuildIndex)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
