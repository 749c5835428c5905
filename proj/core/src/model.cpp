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

#include "ccdf/model.hpp"

#include <cmath>
#include <string>

#include "ccdf/rng.hpp"

namespace ccdf::model {
namespace {

void fill_xavier(Mat& m, std::mt19937_64& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = (2.0 * uniform_unit(rng) - 1.0) * limit;
}

void fill_xavier(Vec& v, std::mt19937_64& rng) {
  double limit = std::sqrt(6.0 / static_cast<double>(1 + v.cols()));
  for (Eigen::Index c = 0; c < v.cols(); ++c)
    v(c) = (2.0 * uniform_unit(rng) - 1.0) * limit;
}

// Numerically stable softmax over each row, in place.
void softmax_rows(Mat& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    double mx = m.row(r).maxCoeff();
    m.row(r) = (m.row(r).array() - mx).exp();
    m.row(r) /= m.row(r).sum();
  }
}

void check_token(int token, Eigen::Index vocab, const char* table) {
  if (token < 0 || token >= vocab)
    throw CcdfError(ErrorCode::kModel, "vocab-mismatch",
                    std::string(table) + " token " + std::to_string(token) +
                        " out of range [0," + std::to_string(vocab) + ")");
}

}  // namespace

void HyperParams::validate() const {
  if (heads * d_head != d_model)
    throw CcdfError(ErrorCode::kConfig, "bad-hyperparams", "heads * d_head must equal d_model");
  for (int v : {history_cap, d_model, d_cat_in, d_cross, d_prof, heads, d_head, d_match,
                ffn_hidden}) {
    if (v < 1)
      throw CcdfError(ErrorCode::kConfig, "bad-hyperparams", "all dimensions must be >= 1");
  }
}

ModelParams init_params(const HyperParams& hp, int n_items, int n_categories,
                        std::uint64_t seed) {
  hp.validate();
  if (n_items < 1 || n_categories < 1)
    throw CcdfError(ErrorCode::kConfig, "bad-hyperparams", "catalog sizes must be positive");

  ModelParams p;
  p.hp = hp;
  std::mt19937_64 rng(splitmix64(seed));

  p.item_emb.resize(n_items, hp.d_model);
  fill_xavier(p.item_emb, rng);
  p.cat_emb.resize(n_categories, hp.d_cat_in);
  fill_xavier(p.cat_emb, rng);
  p.cross_emb.resize(samples::kCrossingVocab, hp.d_cross);
  fill_xavier(p.cross_emb, rng);
  p.prof_emb.resize(samples::kProfileVocab, hp.d_prof);
  fill_xavier(p.prof_emb, rng);

  p.wq.resize(hp.heads);
  p.wk.resize(hp.heads);
  p.wv.resize(hp.heads);
  for (int h = 0; h < hp.heads; ++h) {
    p.wq[h].resize(hp.d_model, hp.d_head);
    fill_xavier(p.wq[h], rng);
    p.wk[h].resize(hp.d_model, hp.d_head);
    fill_xavier(p.wk[h], rng);
    p.wv[h].resize(hp.d_model, hp.d_head);
    fill_xavier(p.wv[h], rng);
  }
  p.wo.resize(hp.heads * hp.d_head, hp.d_model);
  fill_xavier(p.wo, rng);

  p.w1.resize(hp.d_prof + hp.d_model, hp.ffn_hidden);
  fill_xavier(p.w1, rng);
  p.b1 = Vec::Zero(hp.ffn_hidden);
  p.w2.resize(hp.ffn_hidden, hp.d_match);
  fill_xavier(p.w2, rng);
  p.b2 = Vec::Zero(hp.d_match);

  p.w3.resize(hp.d_cat_in, hp.ffn_hidden);
  fill_xavier(p.w3, rng);
  p.b3 = Vec::Zero(hp.ffn_hidden);
  p.w4.resize(hp.ffn_hidden, hp.d_match);
  fill_xavier(p.w4, rng);
  p.b4 = Vec::Zero(hp.d_match);

  p.wide_w.resize(hp.d_cross + 1);
  fill_xavier(p.wide_w, rng);
  p.wide_b = 0.0;
  return p;
}

Mat mhsa_forward(const Mat& history_emb, const ModelParams& params, MhsaCache* cache) {
  const HyperParams& hp = params.hp;
  Eigen::Index len = history_emb.rows();
  if (len < 1 || len > hp.history_cap)
    throw CcdfError(ErrorCode::kModel, "bad-history-length",
                    "history length must be in [1, T]");

  Mat concat(len, hp.heads * hp.d_head);
  if (cache != nullptr) {
    cache->q.resize(hp.heads);
    cache->k.resize(hp.heads);
    cache->v.resize(hp.heads);
    cache->attn.resize(hp.heads);
  }
  double scale = 1.0 / std::sqrt(static_cast<double>(hp.d_head));
  for (int h = 0; h < hp.heads; ++h) {
    Mat q = history_emb * params.wq[h];
    Mat k = history_emb * params.wk[h];
    Mat v = history_emb * params.wv[h];
    Mat attn = q * k.transpose() * scale;
    softmax_rows(attn);
    concat.block(0, h * hp.d_head, len, hp.d_head) = attn * v;
    if (cache != nullptr) {
      cache->q[h] = std::move(q);
      cache->k[h] = std::move(k);
      cache->v[h] = std::move(v);
      cache->attn[h] = std::move(attn);
    }
  }
  if (cache != nullptr) cache->concat = concat;
  return concat * params.wo;
}

Vec user_net(const Mat& mhsa_out, const Vec& profile_emb, const ModelParams& params,
             UserNetCache* cache) {
  Vec pooled = mhsa_out.colwise().sum();
  Vec concat_in(profile_emb.cols() + pooled.cols());
  concat_in << profile_emb, pooled;

  Vec h1_pre = concat_in * params.w1 + params.b1;
  Vec h1 = h1_pre.cwiseMax(0.0);
  Vec out_pre = h1 * params.w2 + params.b2;
  Vec e_u = out_pre.cwiseMax(0.0);

  if (cache != nullptr) {
    cache->mhsa_out = mhsa_out;
    cache->concat_in = std::move(concat_in);
    cache->h1_pre = std::move(h1_pre);
    cache->h1 = std::move(h1);
    cache->out_pre = std::move(out_pre);
  }
  return e_u;
}

Vec user_forward(std::span<const ItemId> history, int profile_token, const ModelParams& params,
                 const Catalog& catalog, UserNetCache* cache) {
  check_token(profile_token, params.prof_emb.rows(), "profile");
  Mat history_emb(static_cast<Eigen::Index>(history.size()), params.hp.d_model);
  for (std::size_t i = 0; i < history.size(); ++i)
    history_emb.row(static_cast<Eigen::Index>(i)) = params.item_emb.row(catalog.item_index(history[i]));

  Mat mhsa_out = mhsa_forward(history_emb, params, cache != nullptr ? &cache->mhsa : nullptr);
  if (cache != nullptr) cache->history_emb = std::move(history_emb);
  return user_net(mhsa_out, params.prof_emb.row(profile_token), params, cache);
}

Vec category_net(const Vec& cat_emb, const ModelParams& params, CatNetCache* cache) {
  Vec h1_pre = cat_emb * params.w3 + params.b3;
  Vec h1 = h1_pre.cwiseMax(0.0);
  Vec out_pre = h1 * params.w4 + params.b4;
  Vec out = out_pre.cwiseMax(0.0);
  if (cache != nullptr) {
    cache->input = cat_emb;
    cache->h1_pre = std::move(h1_pre);
    cache->h1 = std::move(h1);
    cache->out_pre = std::move(out_pre);
  }
  return out;
}

double score(const Vec& user_vec, const Vec& cat_vec, const samples::CrossingTokens& crossing,
             const ModelParams& params) {
  check_token(crossing.count_token, params.cross_emb.rows(), "crossing");
  check_token(crossing.recency_token, params.cross_emb.rows(), "crossing");
  Vec cross = params.cross_emb.row(crossing.count_token) +
              params.cross_emb.row(crossing.recency_token);
  double f = params.wide_w.head(params.hp.d_cross).dot(cross) +
             params.wide_w(params.hp.d_cross) * user_vec.dot(cat_vec) + params.wide_b;
  if (!std::isfinite(f))
    throw CcdfError(ErrorCode::kModel, "non-finite-score", "score is not finite");
  return f;
}

Mat all_category_vectors(const ModelParams& params) {
  // Two batched GEMMs over the whole category table.
  Mat h1 = ((params.cat_emb * params.w3).rowwise() + params.b3).cwiseMax(0.0);
  return ((h1 * params.w4).rowwise() + params.b4).cwiseMax(0.0);
}

std::vector<double> score_categories(std::span<const ItemId> history, int profile_token,
                                     UserId user, std::span<const CategoryId> category_ids,
                                     const ModelParams& params, const Catalog& catalog,
                                     const samples::UserCategoryGraph& graph,
                                     const Mat& category_vectors) {
  Vec e_u = user_forward(history, profile_token, params, catalog);
  samples::CrossingLookup crossing(user, graph, history, catalog);
  std::vector<double> scores;
  scores.reserve(category_ids.size());
  for (CategoryId c : category_ids) {
    Vec cat_vec = category_vectors.row(catalog.category_index(c));
    scores.push_back(score(e_u, cat_vec, crossing.tokens(c), params));
  }
  return scores;
}

}  // namespace ccdf::model
