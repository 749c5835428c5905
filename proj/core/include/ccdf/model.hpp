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

#ifndef CCDF_MODEL_HPP_
#define CCDF_MODEL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "ccdf/samples.hpp"
#include "ccdf/types.hpp"

namespace ccdf::model {

// Row-major so checkpoints serialize tensors without transposition.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::RowVectorXd;

struct HyperParams {
  int history_cap = 20;  // T
  int d_model = 64;      // item embedding dim
  int d_cat_in = 32;     // category embedding dim
  int d_cross = 8;       // crossing embedding dim
  int d_prof = 8;        // profile embedding dim
  int heads = 8;         // H
  int d_head = 8;        // d_h, with H * d_h == d_model
  int d_match = 32;      // d, shared output dim of both towers
  int ffn_hidden = 64;

  void validate() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

// All learnable tensors. Embedding vectors are rows; dense layers compute
// row-vector x W + b.
struct ModelParams {
  HyperParams hp;

  Mat item_emb;   // |I| x d_model
  Mat cat_emb;    // |C| x d_cat_in
  Mat cross_emb;  // crossing vocab x d_cross
  Mat prof_emb;   // profile vocab x d_prof

  std::vector<Mat> wq, wk, wv;  // per head, d_model x d_head
  Mat wo;                       // (H * d_head) x d_model

  Mat w1;  // (d_prof + d_model) x ffn_hidden
  Vec b1;
  Mat w2;  // ffn_hidden x d_match
  Vec b2;

  Mat w3;  // d_cat_in x ffn_hidden
  Vec b3;
  Mat w4;  // ffn_hidden x d_match
  Vec b4;

  Vec wide_w;  // d_cross + 1
  double wide_b = 0.0;
};

// Xavier-uniform weights and embeddings, zero biases; deterministic in seed.
ModelParams init_params(const HyperParams& hp, int n_items, int n_categories,
                        std::uint64_t seed);

// Forward intermediates kept for backpropagation.
struct MhsaCache {
  std::vector<Mat> q, k, v;     // per head, L x d_head
  std::vector<Mat> attn;        // per head, L x L softmax rows
  Mat concat;                   // L x (H * d_head)
};

// Eq-style multi-head self-attention over the history: per head
// softmax(Q K^T / sqrt(d_h)) V, heads concatenated then projected by W^O.
// No positional encoding, no masking.
Mat mhsa_forward(const Mat& history_emb, const ModelParams& params, MhsaCache* cache = nullptr);

struct UserNetCache {
  Mat history_emb;  // L x d_model input rows
  MhsaCache mhsa;
  Mat mhsa_out;   // L x d_model
  Vec concat_in;  // profile ++ sum-pool
  Vec h1_pre, h1;
  Vec out_pre;
};

// e_u = ReLU(ReLU((e_P ++ sum(E_u^s)) W1 + b1) W2 + b2)
Vec user_net(const Mat& mhsa_out, const Vec& profile_emb, const ModelParams& params,
             UserNetCache* cache = nullptr);

// Full user tower from item ids + profile token.
Vec user_forward(std::span<const ItemId> history, int profile_token, const ModelParams& params,
                 const Catalog& catalog, UserNetCache* cache = nullptr);

struct CatNetCache {
  Vec input;
  Vec h1_pre, h1;
  Vec out_pre;
};

// e'_c = ReLU(ReLU(e_c W3 + b3) W4 + b4)
Vec category_net(const Vec& cat_emb, const ModelParams& params, CatNetCache* cache = nullptr);

// Wide layer on top of the towers:
// f(u,c) = w^T (e_F ++ <e_u, e'_c>) + b, with e_F the element-wise sum of the
// two crossing-token embeddings.
double score(const Vec& user_vec, const Vec& cat_vec, const samples::CrossingTokens& crossing,
             const ModelParams& params);

// Category-tower outputs for all categories, one row per catalog index.
// Immutable params allow computing this once per evaluation pass.
Mat all_category_vectors(const ModelParams& params);

// Batched scoring that reuses a single e_u across categories. Crossing tokens
// are derived per (user, category) from the graph and the history window.
std::vector<double> score_categories(std::span<const ItemId> history, int profile_token,
                                     UserId user, std::span<const CategoryId> category_ids,
                                     const ModelParams& params, const Catalog& catalog,
                                     const samples::UserCategoryGraph& graph,
                                     const Mat& category_vectors);

}  // namespace ccdf::model

#endif  // CCDF_MODEL_HPP_
