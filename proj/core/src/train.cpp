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

#include "ccdf/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ccdf/eval.hpp"
#include "ccdf/rng.hpp"

namespace ccdf::train {
namespace {

using model::ModelParams;
using samples::TrainingSample;

Vec& sparse_row(std::map<int, Vec>& rows, int index, Eigen::Index dim) {
  auto [it, inserted] = rows.try_emplace(index, Vec::Zero(dim));
  return it->second;
}

// One scored (user, category) pair inside a sample's loss.
struct ScoredCategory {
  CategoryId category = 0;
  int cat_row = 0;
  samples::CrossingTokens crossing;
  double f = 0.0;
  double grad = 0.0;  // dL/df accumulated across CE and triplet terms
};

void check_finite(const char* name, const Mat& m) {
  if (!m.allFinite())
    throw CcdfError(ErrorCode::kModel, "non-finite-gradient",
                    std::string("non-finite gradient in ") + name);
}

void check_finite(const char* name, const Vec& v) {
  if (!v.allFinite())
    throw CcdfError(ErrorCode::kModel, "non-finite-gradient",
                    std::string("non-finite gradient in ") + name);
}

}  // namespace

void TrainConfig::validate() const {
  if (margin < 0.0 || lambda < 0.0)
    throw CcdfError(ErrorCode::kConfig, "bad-train-config", "margin and lambda must be >= 0");
  if (learning_rate <= 0.0 || batch_size < 1 || max_epochs < 1)
    throw CcdfError(ErrorCode::kConfig, "bad-train-config",
                    "learning_rate, batch_size and max_epochs must be positive");
}

double sampled_ce_loss(double f_target, std::span<const double> f_negatives) {
  if (f_negatives.empty())
    throw CcdfError(ErrorCode::kModel, "no-negatives", "sampled CE needs at least one negative");
  double mx = f_target;
  for (double f : f_negatives) mx = std::max(mx, f);
  if (!std::isfinite(mx))
    throw CcdfError(ErrorCode::kModel, "non-finite-score", "non-finite logit in sampled CE");
  double denom = std::exp(f_target - mx);
  for (double f : f_negatives) denom += std::exp(f - mx);
  return -(f_target - mx - std::log(denom));
}

double triplet_loss(double f_target, std::span<const std::pair<double, int>> neighbor_scores,
                    int s_target, double margin) {
  if (neighbor_scores.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [f_j, s_j] : neighbor_scores) {
    double sign = s_target - s_j > 0 ? 1.0 : -1.0;  // sign(0) = -1
    total += std::max(sign * (f_j - f_target) + margin, 0.0);
  }
  return total / static_cast<double>(neighbor_scores.size());
}

GradientSet GradientSet::zeros_like(const ModelParams& p) {
  GradientSet g;
  g.wq.resize(p.wq.size());
  g.wk.resize(p.wk.size());
  g.wv.resize(p.wv.size());
  for (std::size_t h = 0; h < p.wq.size(); ++h) {
    g.wq[h] = Mat::Zero(p.wq[h].rows(), p.wq[h].cols());
    g.wk[h] = Mat::Zero(p.wk[h].rows(), p.wk[h].cols());
    g.wv[h] = Mat::Zero(p.wv[h].rows(), p.wv[h].cols());
  }
  g.wo = Mat::Zero(p.wo.rows(), p.wo.cols());
  g.w1 = Mat::Zero(p.w1.rows(), p.w1.cols());
  g.b1 = Vec::Zero(p.b1.cols());
  g.w2 = Mat::Zero(p.w2.rows(), p.w2.cols());
  g.b2 = Vec::Zero(p.b2.cols());
  g.w3 = Mat::Zero(p.w3.rows(), p.w3.cols());
  g.b3 = Vec::Zero(p.b3.cols());
  g.w4 = Mat::Zero(p.w4.rows(), p.w4.cols());
  g.b4 = Vec::Zero(p.b4.cols());
  g.wide_w = Vec::Zero(p.wide_w.cols());
  g.wide_b = 0.0;
  return g;
}

BatchResult backward(std::span<const TrainingSample> batch, const ModelParams& params,
                     const Catalog& catalog, const samples::UserCategoryGraph& graph,
                     const TrainConfig& config) {
  if (batch.empty())
    throw CcdfError(ErrorCode::kInternal, "empty-batch", "backward over an empty batch");
  const model::HyperParams& hp = params.hp;
  const int d_cross = hp.d_cross;
  const double w_dot = params.wide_w(d_cross);

  BatchResult result;
  result.grads = GradientSet::zeros_like(params);
  GradientSet& g = result.grads;

  double ce_sum = 0.0;
  double triplet_sum = 0.0;

  for (const TrainingSample& sample : batch) {
    if (sample.history.empty())
      throw CcdfError(ErrorCode::kData, "empty-history", "training sample without history");

    model::UserNetCache ucache;
    Vec e_u = model::user_forward(sample.history, sample.profile_token, params, catalog, &ucache);

    samples::CrossingLookup crossing(sample.user_id, graph, sample.history, catalog);

    // Scored list: target first, then softmax negatives, then triplet
    // neighbors. A sample with an empty negative pool falls back to the full
    // softmax over all other categories.
    std::vector<ScoredCategory> scored;
    std::vector<std::pair<CategoryId, int>> negs;  // (category, unused)
    if (sample.full_softmax) {
      for (CategoryId c : catalog.categories)
        if (c != sample.target_category) negs.emplace_back(c, 0);
    } else {
      for (CategoryId c : sample.negatives) negs.emplace_back(c, 0);
    }
    scored.reserve(1 + negs.size() + sample.neighbors.size());

    auto add_scored = [&](CategoryId c) {
      ScoredCategory sc;
      sc.category = c;
      sc.cat_row = catalog.category_index(c);
      sc.crossing = crossing.tokens(c);
      scored.push_back(sc);
    };
    add_scored(sample.target_category);
    for (const auto& [c, unused] : negs) add_scored(c);
    const std::size_t neighbor_base = scored.size();
    for (const auto& [c, s] : sample.neighbors) add_scored(c);

    const Eigen::Index n_scored = static_cast<Eigen::Index>(scored.size());

    // Batched category tower over all scored categories.
    Mat x0(n_scored, hp.d_cat_in);
    for (Eigen::Index i = 0; i < n_scored; ++i)
      x0.row(i) = params.cat_emb.row(scored[static_cast<std::size_t>(i)].cat_row);
    Mat h1_pre = (x0 * params.w3).rowwise() + params.b3;
    Mat h1 = h1_pre.cwiseMax(0.0);
    Mat h2_pre = (h1 * params.w4).rowwise() + params.b4;
    Mat x2 = h2_pre.cwiseMax(0.0);

    Eigen::VectorXd dots = x2 * e_u.transpose();
    std::vector<Vec> cross_vecs(scored.size());
    for (std::size_t i = 0; i < scored.size(); ++i) {
      const auto& t = scored[i].crossing;
      cross_vecs[i] = params.cross_emb.row(t.count_token) + params.cross_emb.row(t.recency_token);
      scored[i].f = params.wide_w.head(d_cross).dot(cross_vecs[i]) +
                    w_dot * dots(static_cast<Eigen::Index>(i)) + params.wide_b;
      if (!std::isfinite(scored[i].f))
        throw CcdfError(ErrorCode::kModel, "non-finite-score", "score is not finite");
    }

    // Cross entropy over target + negatives.
    double ce = 0.0;
    if (neighbor_base > 1) {
      std::vector<double> neg_logits;
      neg_logits.reserve(neighbor_base - 1);
      double correction = 0.0;
      if (config.logq_correction && !sample.full_softmax) {
        const auto* interacted = graph.user_edges(sample.user_id);
        std::size_t pool =
            catalog.categories.size() - (interacted != nullptr ? interacted->size() : 0);
        if (pool > 0)
          correction = std::log(static_cast<double>(neighbor_base - 1) /
                                static_cast<double>(pool));
      }
      for (std::size_t i = 1; i < neighbor_base; ++i)
        neg_logits.push_back(scored[i].f - correction);
      ce = sampled_ce_loss(scored[0].f, neg_logits);

      // Softmax residuals.
      double mx = scored[0].f;
      for (double f : neg_logits) mx = std::max(mx, f);
      double denom = std::exp(scored[0].f - mx);
      for (double f : neg_logits) denom += std::exp(f - mx);
      scored[0].grad += std::exp(scored[0].f - mx) / denom - 1.0;
      for (std::size_t i = 1; i < neighbor_base; ++i)
        scored[i].grad += std::exp(neg_logits[i - 1] - mx) / denom;
    }
    ce_sum += ce;

    // Triplet hinge over neighbors.
    if (!sample.neighbors.empty()) {
      double n_nei = static_cast<double>(sample.neighbors.size());
      double t_loss = 0.0;
      for (std::size_t j = 0; j < sample.neighbors.size(); ++j) {
        ScoredCategory& nb = scored[neighbor_base + j];
        double sign = sample.target_count - sample.neighbors[j].second > 0 ? 1.0 : -1.0;
        double hinge = sign * (nb.f - scored[0].f) + config.margin;
        if (hinge > 0.0) {
          t_loss += hinge;
          nb.grad += config.lambda * sign / n_nei;
          scored[0].grad -= config.lambda * sign / n_nei;
        }
      }
      triplet_sum += t_loss / n_nei;
    }

    // ---- Backward ----
    Vec d_eu = Vec::Zero(hp.d_match);
    Mat d_x2 = Mat::Zero(n_scored, hp.d_match);
    for (std::size_t i = 0; i < scored.size(); ++i) {
      double gf = scored[i].grad;
      if (gf == 0.0) continue;
      Eigen::Index ei = static_cast<Eigen::Index>(i);
      g.wide_w.head(d_cross) += gf * cross_vecs[i];
      g.wide_w(d_cross) += gf * dots(ei);
      g.wide_b += gf;
      Vec d_cross_vec = gf * params.wide_w.head(d_cross);
      sparse_row(g.cross_emb, scored[i].crossing.count_token, d_cross) += d_cross_vec;
      sparse_row(g.cross_emb, scored[i].crossing.recency_token, d_cross) += d_cross_vec;
      d_eu += gf * w_dot * x2.row(ei);
      d_x2.row(ei) = gf * w_dot * e_u;
    }

    // Category tower backward (batched).
    Mat d_h2pre = (h2_pre.array() > 0.0).cast<double>() * d_x2.array();
    g.w4 += h1.transpose() * d_h2pre;
    g.b4 += d_h2pre.colwise().sum();
    Mat d_h1 = d_h2pre * params.w4.transpose();
    Mat d_h1pre = (h1_pre.array() > 0.0).cast<double>() * d_h1.array();
    g.w3 += x0.transpose() * d_h1pre;
    g.b3 += d_h1pre.colwise().sum();
    Mat d_x0 = d_h1pre * params.w3.transpose();
    for (Eigen::Index i = 0; i < n_scored; ++i)
      sparse_row(g.cat_emb, scored[static_cast<std::size_t>(i)].cat_row, hp.d_cat_in) +=
          d_x0.row(i);

    // User tower backward.
    Vec d_outpre =
        (ucache.out_pre.array() > 0.0).cast<double>() * d_eu.array();
    g.w2 += ucache.h1.transpose() * d_outpre;
    g.b2 += d_outpre;
    Vec d_h1u = d_outpre * params.w2.transpose();
    Vec d_h1pre_u = (ucache.h1_pre.array() > 0.0).cast<double>() * d_h1u.array();
    g.w1 += ucache.concat_in.transpose() * d_h1pre_u;
    g.b1 += d_h1pre_u;
    Vec d_concat = d_h1pre_u * params.w1.transpose();
    sparse_row(g.prof_emb, sample.profile_token, hp.d_prof) += d_concat.head(hp.d_prof);
    Vec d_pooled = d_concat.tail(hp.d_model);

    // Sum-pool broadcast, then MHSA backward.
    const Eigen::Index len = ucache.history_emb.rows();
    Mat d_mhsa_out = d_pooled.replicate(len, 1);

    g.wo += ucache.mhsa.concat.transpose() * d_mhsa_out;
    Mat d_concat_heads = d_mhsa_out * params.wo.transpose();
    Mat d_x = Mat::Zero(len, hp.d_model);
    const double scale = 1.0 / std::sqrt(static_cast<double>(hp.d_head));
    for (int h = 0; h < hp.heads; ++h) {
      const Mat& attn = ucache.mhsa.attn[h];
      Mat d_head = d_concat_heads.block(0, h * hp.d_head, len, hp.d_head);
      Mat d_v = attn.transpose() * d_head;
      Mat d_attn = d_head * ucache.mhsa.v[h].transpose();
      Mat d_scores(len, len);
      for (Eigen::Index r = 0; r < len; ++r) {
        double dot = d_attn.row(r).dot(attn.row(r));
        d_scores.row(r) = attn.row(r).array() * (d_attn.row(r).array() - dot);
      }
      Mat d_q = d_scores * ucache.mhsa.k[h] * scale;
      Mat d_k = d_scores.transpose() * ucache.mhsa.q[h] * scale;
      g.wq[static_cast<std::size_t>(h)] += ucache.history_emb.transpose() * d_q;
      g.wk[static_cast<std::size_t>(h)] += ucache.history_emb.transpose() * d_k;
      g.wv[static_cast<std::size_t>(h)] += ucache.history_emb.transpose() * d_v;
      d_x += d_q * params.wq[static_cast<std::size_t>(h)].transpose() +
             d_k * params.wk[static_cast<std::size_t>(h)].transpose() +
             d_v * params.wv[static_cast<std::size_t>(h)].transpose();
    }
    for (Eigen::Index i = 0; i < len; ++i)
      sparse_row(g.item_emb,
                 catalog.item_index(sample.history[static_cast<std::size_t>(i)]), hp.d_model) +=
          d_x.row(i);
  }

  // Mean over the batch.
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t h = 0; h < g.wq.size(); ++h) {
    g.wq[h] *= inv;
    g.wk[h] *= inv;
    g.wv[h] *= inv;
  }
  g.wo *= inv;
  g.w1 *= inv;
  g.b1 *= inv;
  g.w2 *= inv;
  g.b2 *= inv;
  g.w3 *= inv;
  g.b3 *= inv;
  g.w4 *= inv;
  g.b4 *= inv;
  g.wide_w *= inv;
  g.wide_b *= inv;
  for (auto* rows : {&g.item_emb, &g.cat_emb, &g.cross_emb, &g.prof_emb})
    for (auto& [row, grad] : *rows) grad *= inv;

  for (std::size_t h = 0; h < g.wq.size(); ++h) {
    check_finite("wq", g.wq[h]);
    check_finite("wk", g.wk[h]);
    check_finite("wv", g.wv[h]);
  }
  check_finite("wo", g.wo);
  check_finite("w1", g.w1);
  check_finite("b1", g.b1);
  check_finite("w2", g.w2);
  check_finite("b2", g.b2);
  check_finite("w3", g.w3);
  check_finite("b3", g.b3);
  check_finite("w4", g.w4);
  check_finite("b4", g.b4);
  check_finite("wide_w", g.wide_w);
  if (!std::isfinite(g.wide_b))
    throw CcdfError(ErrorCode::kModel, "non-finite-gradient", "non-finite gradient in wide_b");
  for (const auto& [row, grad] : g.item_emb) check_finite("item_emb", grad);
  for (const auto& [row, grad] : g.cat_emb) check_finite("cat_emb", grad);
  for (const auto& [row, grad] : g.cross_emb) check_finite("cross_emb", grad);
  for (const auto& [row, grad] : g.prof_emb) check_finite("prof_emb", grad);

  result.mean_ce = ce_sum * inv;
  result.mean_triplet = triplet_sum * inv;
  result.loss = combined_loss(result.mean_ce, result.mean_triplet, config.lambda);
  return result;
}

namespace {

void adam_dense(Mat& param, const Mat& grad, AdamState::Dense& moments, std::int64_t t,
                const TrainConfig& c) {
  if (moments.m.size() == 0) {
    moments.m = Mat::Zero(param.rows(), param.cols());
    moments.v = Mat::Zero(param.rows(), param.cols());
  }
  moments.m = c.beta1 * moments.m + (1.0 - c.beta1) * grad;
  moments.v = c.beta2 * moments.v.array() + (1.0 - c.beta2) * grad.array().square();
  double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
  double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));
  param.array() -= c.learning_rate * (moments.m.array() / bc1) /
                   ((moments.v.array() / bc2).sqrt() + c.epsilon);
}

void adam_dense(Vec& param, const Vec& grad, AdamState::Dense& moments, std::int64_t t,
                const TrainConfig& c) {
  Mat p = param, g = grad;
  adam_dense(p, g, moments, t, c);
  param = p;
}

void adam_rows(Mat& table, const std::map<int, Vec>& grads, std::map<int, AdamState::Row>& state,
               const TrainConfig& c) {
  for (const auto& [row, grad] : grads) {
    auto [it, inserted] = state.try_emplace(row);
    AdamState::Row& r = it->second;
    if (inserted) {
      r.m = Vec::Zero(grad.cols());
      r.v = Vec::Zero(grad.cols());
    }
    ++r.t;
    r.m = c.beta1 * r.m + (1.0 - c.beta1) * grad;
    r.v = c.beta2 * r.v.array() + (1.0 - c.beta2) * grad.array().square();
    double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(r.t));
    double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(r.t));
    table.row(row).array() -= c.learning_rate * (r.m.array() / bc1) /
                              ((r.v.array() / bc2).sqrt() + c.epsilon);
  }
}

}  // namespace

void adam_step(ModelParams& params, const GradientSet& grads, AdamState& state,
               const TrainConfig& config) {
  if (!state.initialized) {
    state.wq.resize(params.wq.size());
    state.wk.resize(params.wk.size());
    state.wv.resize(params.wv.size());
    state.initialized = true;
  }
  ++state.t;
  for (std::size_t h = 0; h < params.wq.size(); ++h) {
    adam_dense(params.wq[h], grads.wq[h], state.wq[h], state.t, config);
    adam_dense(params.wk[h], grads.wk[h], state.wk[h], state.t, config);
    adam_dense(params.wv[h], grads.wv[h], state.wv[h], state.t, config);
  }
  adam_dense(params.wo, grads.wo, state.wo, state.t, config);
  adam_dense(params.w1, grads.w1, state.w1, state.t, config);
  adam_dense(params.b1, grads.b1, state.b1, state.t, config);
  adam_dense(params.w2, grads.w2, state.w2, state.t, config);
  adam_dense(params.b2, grads.b2, state.b2, state.t, config);
  adam_dense(params.w3, grads.w3, state.w3, state.t, config);
  adam_dense(params.b3, grads.b3, state.b3, state.t, config);
  adam_dense(params.w4, grads.w4, state.w4, state.t, config);
  adam_dense(params.b4, grads.b4, state.b4, state.t, config);
  adam_dense(params.wide_w, grads.wide_w, state.wide_w, state.t, config);
  {
    state.wide_b_m = config.beta1 * state.wide_b_m + (1.0 - config.beta1) * grads.wide_b;
    state.wide_b_v =
        config.beta2 * state.wide_b_v + (1.0 - config.beta2) * grads.wide_b * grads.wide_b;
    double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
    params.wide_b -= config.learning_rate * (state.wide_b_m / bc1) /
                     (std::sqrt(state.wide_b_v / bc2) + config.epsilon);
  }
  adam_rows(params.item_emb, grads.item_emb, state.item_emb, config);
  adam_rows(params.cat_emb, grads.cat_emb, state.cat_emb, config);
  adam_rows(params.cross_emb, grads.cross_emb, state.cross_emb, config);
  adam_rows(params.prof_emb, grads.prof_emb, state.prof_emb, config);
}

namespace {

struct ValidationScores {
  double pooled = std::numeric_limits<double>::quiet_NaN();
  double u = std::numeric_limits<double>::quiet_NaN();
  double n = std::numeric_limits<double>::quiet_NaN();
};

ValidationScores validation_hr5(const std::vector<samples::EvalSample>& validation,
                                const ModelParams& params, const Catalog& catalog,
                                const samples::UserCategoryGraph& graph) {
  ValidationScores scores;
  if (validation.empty()) return scores;
  model::Mat category_vectors = model::all_category_vectors(params);
  std::vector<eval::RankedCategories> rankings;
  rankings.reserve(validation.size());
  for (const auto& s : validation)
    rankings.push_back(eval::rank_categories(s.history, 0, s.user_id, params, catalog, graph,
                                             category_vectors));
  if (auto hr = eval::hr_at_k(rankings, validation, 5, std::nullopt)) scores.pooled = *hr;
  if (auto hr = eval::hr_at_k(rankings, validation, 5, samples::Task::kU)) scores.u = *hr;
  if (auto hr = eval::hr_at_k(rankings, validation, 5, samples::Task::kN)) scores.n = *hr;
  return scores;
}

}  // namespace

TrainResult train(const std::vector<TrainingSample>& training_samples,
                  const std::vector<samples::EvalSample>& validation_samples,
                  const Catalog& catalog, const samples::UserCategoryGraph& graph,
                  const model::HyperParams& hp, const TrainConfig& config) {
  config.validate();
  if (training_samples.empty())
    throw CcdfError(ErrorCode::kData, "no-training-samples", "training sample set is empty");

  TrainResult result;
  ModelParams params = init_params(hp, static_cast<int>(catalog.items.size()),
                                   static_cast<int>(catalog.categories.size()), config.seed);
  AdamState state;
  result.params = params;
  result.best_epoch = 0;
  double best_hr = -1.0;

  std::vector<std::size_t> order(training_samples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    // Seeded Fisher-Yates, independent of the library's std::shuffle.
    std::mt19937_64 rng(derive_seed(config.seed, 0x9000 + static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = uniform_index(rng, i);
      std::swap(order[i - 1], order[j]);
    }

    double ce_sum = 0.0;
    double triplet_sum = 0.0;
    std::size_t seen = 0;
    bool ok = true;
    std::vector<TrainingSample> batch;
    batch.reserve(static_cast<std::size_t>(config.batch_size));
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      batch.clear();
      std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      for (std::size_t i = start; i < end; ++i) batch.push_back(training_samples[order[i]]);
      try {
        BatchResult br = backward(batch, params, catalog, graph, config);
        if (!std::isfinite(br.loss)) throw CcdfError(ErrorCode::kModel, "non-finite-loss", "");
        adam_step(params, br.grads, state, config);
        ce_sum += br.mean_ce * static_cast<double>(batch.size());
        triplet_sum += br.mean_triplet * static_cast<double>(batch.size());
        seen += batch.size();
      } catch (const CcdfError& e) {
        if (e.tag() == "non-finite-loss" || e.tag() == "non-finite-gradient" ||
            e.tag() == "non-finite-score") {
          result.diverged = true;
          ok = false;
          break;
        }
        throw;
      }
    }
    if (!ok) break;

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.mean_ce = seen > 0 ? ce_sum / static_cast<double>(seen) : 0.0;
    metrics.mean_triplet = seen > 0 ? triplet_sum / static_cast<double>(seen) : 0.0;
    ValidationScores val = validation_hr5(validation_samples, params, catalog, graph);
    metrics.val_hr5_pooled = val.pooled;
    metrics.val_hr5_u = val.u;
    metrics.val_hr5_n = val.n;
    result.metrics.push_back(metrics);

    double selection = std::isnan(val.pooled) ? 0.0 : val.pooled;
    if (selection > best_hr) {
      best_hr = selection;
      result.params = params;
      result.best_epoch = epoch;
    }
  }
  return result;
}

}  // namespace ccdf::train
