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

#ifndef CCDF_EVAL_HPP_
#define CCDF_EVAL_HPP_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "ccdf/model.hpp"
#include "ccdf/samples.hpp"
#include "ccdf/types.hpp"

namespace ccdf::eval {

// Full category ranking, descending score, ties broken by ascending id.
// hr_prefix limits the portion of the list that can produce a hit: the
// Statistics baseline is scored on its historical prefix only, so its
// arbitrarily ordered tail never counts.
struct RankedCategories {
  std::vector<std::pair<CategoryId, double>> entries;
  std::size_t hr_prefix = 0;
};

RankedCategories rank_categories(std::span<const ItemId> history, int profile_token, UserId user,
                                 const model::ModelParams& params, const Catalog& catalog,
                                 const samples::UserCategoryGraph& graph,
                                 const model::Mat& category_vectors);

// Historical categories ranked by (interaction count desc, most recent
// position desc, id asc), remaining categories appended by ascending id.
RankedCategories statistics_baseline(std::span<const ItemId> history, const Catalog& catalog);

// Fraction of filtered samples whose target sits in the top-K of its ranking;
// nullopt when the filter leaves no samples (never 0/0). rankings[i] pairs
// with samples[i].
std::optional<double> hr_at_k(const std::vector<RankedCategories>& rankings,
                              const std::vector<samples::EvalSample>& eval_samples, int k,
                              std::optional<samples::Task> task_filter);

struct TaskReport {
  std::size_t count = 0;
  std::map<int, double> hr;  // by K; key absent when not applicable
};

struct EvalReport {
  TaskReport u;
  TaskReport n;
  std::size_t samples = 0;
};

EvalReport report_from_rankings(const std::vector<RankedCategories>& rankings,
                                const std::vector<samples::EvalSample>& eval_samples,
                                std::span<const int> ks);

EvalReport evaluate_model(const std::vector<samples::EvalSample>& eval_samples,
                          const model::ModelParams& params, const Catalog& catalog,
                          const samples::UserCategoryGraph& graph, std::span<const int> ks);

EvalReport evaluate_statistics(const std::vector<samples::EvalSample>& eval_samples,
                               const Catalog& catalog, std::span<const int> ks);

// Offline diversity over recommendation output: per user the distinct exposed
// categories and those absent from the user's full history, averaged.
struct DiversityReport {
  std::size_t users = 0;
  double avg_exposed_categories = 0.0;
  double avg_exposed_n_categories = 0.0;
};

DiversityReport diversity_report(
    const std::map<UserId, std::vector<CategoryId>>& recommended_categories,
    const std::map<UserId, std::set<CategoryId>>& history_categories);

}  // namespace ccdf::eval

#endif  // CCDF_EVAL_HPP_
