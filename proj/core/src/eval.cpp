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

#include <algorithm>

namespace ccdf::eval {
namespace {

void sort_entries(std::vector<std::pair<CategoryId, double>>& entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

bool ranking_hit(const RankedCategories& ranking, CategoryId target, int k) {
  std::size_t limit = std::min<std::size_t>(static_cast<std::size_t>(k), ranking.hr_prefix);
  for (std::size_t i = 0; i < limit && i < ranking.entries.size(); ++i) {
    if (ranking.entries[i].first == target) return true;
  }
  return false;
}

}  // namespace

RankedCategories rank_categories(std::span<const ItemId> history, int profile_token, UserId user,
                                 const model::ModelParams& params, const Catalog& catalog,
                                 const samples::UserCategoryGraph& graph,
                                 const model::Mat& category_vectors) {
  std::vector<double> scores =
      model::score_categories(history, profile_token, user, catalog.categories, params, catalog,
                              graph, category_vectors);
  RankedCategories ranking;
  ranking.entries.reserve(catalog.categories.size());
  for (std::size_t i = 0; i < catalog.categories.size(); ++i)
    ranking.entries.emplace_back(catalog.categories[i], scores[i]);
  sort_entries(ranking.entries);
  ranking.hr_prefix = ranking.entries.size();
  return ranking;
}

RankedCategories statistics_baseline(std::span<const ItemId> history, const Catalog& catalog) {
  struct Signal {
    int count = 0;
    std::size_t last_position = 0;  // 1-based, later is more recent
  };
  std::map<CategoryId, Signal> seen;
  for (std::size_t i = 0; i < history.size(); ++i) {
    Signal& s = seen[catalog.category_of(history[i])];
    ++s.count;
    s.last_position = i + 1;
  }

  std::vector<std::pair<CategoryId, Signal>> historical(seen.begin(), seen.end());
  std::sort(historical.begin(), historical.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    if (a.second.last_position != b.second.last_position)
      return a.second.last_position > b.second.last_position;
    return a.first < b.first;
  });

  RankedCategories ranking;
  ranking.entries.reserve(catalog.categories.size());
  // Scores only encode the ordering; descending ranks of the prefix, zero tail.
  double rank_score = static_cast<double>(historical.size());
  for (const auto& [cat, signal] : historical) ranking.entries.emplace_back(cat, rank_score--);
  for (CategoryId cat : catalog.categories) {
    if (!seen.count(cat)) ranking.entries.emplace_back(cat, 0.0);
  }
  ranking.hr_prefix = historical.size();
  return ranking;
}

std::optional<double> hr_at_k(const std::vector<RankedCategories>& rankings,
                              const std::vector<samples::EvalSample>& eval_samples, int k,
                              std::optional<samples::Task> task_filter) {
  if (k < 1)
    throw CcdfError(ErrorCode::kConfig, "bad-k", "K must be >= 1");
  std::size_t hits = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < eval_samples.size(); ++i) {
    if (task_filter && eval_samples[i].task != *task_filter) continue;
    ++n;
    if (ranking_hit(rankings[i], eval_samples[i].target_category, k)) ++hits;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(n);
}

EvalReport report_from_rankings(const std::vector<RankedCategories>& rankings,
                                const std::vector<samples::EvalSample>& eval_samples,
                                std::span<const int> ks) {
  EvalReport report;
  report.samples = eval_samples.size();
  for (const auto& s : eval_samples)
    ++(s.task == samples::Task::kU ? report.u : report.n).count;
  for (int k : ks) {
    if (auto hr = hr_at_k(rankings, eval_samples, k, samples::Task::kU)) report.u.hr[k] = *hr;
    if (auto hr = hr_at_k(rankings, eval_samples, k, samples::Task::kN)) report.n.hr[k] = *hr;
  }
  return report;
}

EvalReport evaluate_model(const std::vector<samples::EvalSample>& eval_samples,
                          const model::ModelParams& params, const Catalog& catalog,
                          const samples::UserCategoryGraph& graph, std::span<const int> ks) {
  model::Mat category_vectors = model::all_category_vectors(params);
  std::vector<RankedCategories> rankings;
  rankings.reserve(eval_samples.size());
  for (const auto& s : eval_samples)
    rankings.push_back(
        rank_categories(s.history, 0, s.user_id, params, catalog, graph, category_vectors));
  return report_from_rankings(rankings, eval_samples, ks);
}

EvalReport evaluate_statistics(const std::vector<samples::EvalSample>& eval_samples,
                               const Catalog& catalog, std::span<const int> ks) {
  std::vector<RankedCategories> rankings;
  rankings.reserve(eval_samples.size());
  for (const auto& s : eval_samples) rankings.push_back(statistics_baseline(s.history, catalog));
  return report_from_rankings(rankings, eval_samples, ks);
}

DiversityReport diversity_report(
    const std::map<UserId, std::vector<CategoryId>>& recommended_categories,
    const std::map<UserId, std::set<CategoryId>>& history_categories) {
  DiversityReport report;
  double exposed_sum = 0.0;
  double n_exposed_sum = 0.0;
  for (const auto& [user, cats] : recommended_categories) {
    std::set<CategoryId> exposed(cats.begin(), cats.end());
    std::size_t n_exposed = 0;
    auto hist = history_categories.find(user);
    for (CategoryId c : exposed) {
      if (hist == history_categories.end() || !hist->second.count(c)) ++n_exposed;
    }
    exposed_sum += static_cast<double>(exposed.size());
    n_exposed_sum += static_cast<double>(n_exposed);
    ++report.users;
  }
  if (report.users > 0) {
    report.avg_exposed_categories = exposed_sum / static_cast<double>(report.users);
    report.avg_exposed_n_categories = n_exposed_sum / static_cast<double>(report.users);
  }
  return report;
}

}  // namespace ccdf::eval
