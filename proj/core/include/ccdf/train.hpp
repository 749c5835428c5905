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

#ifndef CCDF_TRAIN_HPP_
#define CCDF_TRAIN_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ccdf/model.hpp"
#include "ccdf/samples.hpp"
#include "ccdf/types.hpp"

namespace ccdf::train {

using model::Mat;
using model::Vec;

struct TrainConfig {
  int batch_size = 100;
  double learning_rate = 0.001;
  int n_neg = 500;
  int n_nei = 5;
  double margin = 0.4;    // m
  double lambda = 1.0;    // triplet weight
  int max_epochs = 5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  // Optional logQ correction for the uniform sampled softmax. Off by default:
  // uniform negatives keep the uncorrected form rank-consistent.
  bool logq_correction = false;

  void validate() const;
};

// Sampled softmax cross entropy with max-subtraction stabilization:
// -log(exp(f_t) / (exp(f_t) + sum_j exp(f_j))).
double sampled_ce_loss(double f_target, std::span<const double> f_negatives);

// Mean hinge over neighbors with the literal sign convention sign(0) = -1;
// zero when there are no neighbors.
double triplet_loss(double f_target, std::span<const std::pair<double, int>> neighbor_scores,
                    int s_target, double margin);

inline double combined_loss(double ce, double triplet, double lambda) {
  return ce + lambda * triplet;
}

// Gradients mirror ModelParams; embedding tables are sparse by touched row.
struct GradientSet {
  std::map<int, Vec> item_emb, cat_emb, cross_emb, prof_emb;
  std::vector<Mat> wq, wk, wv;
  Mat wo;
  Mat w1;
  Vec b1;
  Mat w2;
  Vec b2;
  Mat w3;
  Vec b3;
  Mat w4;
  Vec b4;
  Vec wide_w;
  double wide_b = 0.0;

  static GradientSet zeros_like(const model::ModelParams& params);
};

struct BatchResult {
  double loss = 0.0;       // mean combined loss over the batch
  double mean_ce = 0.0;
  double mean_triplet = 0.0;
  GradientSet grads;       // of the mean batch loss
};

// Exact analytic gradients of the mean batch loss for every parameter,
// attention and both towers included. ReLU/hinge subgradient at the kink is 0.
BatchResult backward(std::span<const samples::TrainingSample> batch,
                     const model::ModelParams& params, const Catalog& catalog,
                     const samples::UserCategoryGraph& graph, const TrainConfig& config);

struct AdamState {
  struct Dense {
    Mat m, v;
  };
  struct Row {
    Vec m, v;
    std::int64_t t = 0;  // per-row step count for lazily touched embeddings
  };
  std::int64_t t = 0;  // global step for dense tensors
  std::vector<Dense> wq, wk, wv;
  Dense wo, w1, b1, w2, b2, w3, b3, w4, b4, wide_w;
  double wide_b_m = 0.0, wide_b_v = 0.0;
  std::map<int, Row> item_emb, cat_emb, cross_emb, prof_emb;
  bool initialized = false;
};

// Bias-corrected Adam; dense tensors share the global step, embedding rows
// carry their own step so untouched rows stay untouched.
void adam_step(model::ModelParams& params, const GradientSet& grads, AdamState& state,
               const TrainConfig& config);

struct EpochMetrics {
  int epoch = 0;
  double mean_ce = 0.0;
  double mean_triplet = 0.0;
  double val_hr5_pooled = 0.0;
  double val_hr5_u = 0.0;  // NaN when the task subset is empty
  double val_hr5_n = 0.0;
};

struct TrainResult {
  model::ModelParams params;  // best-validation checkpoint
  std::vector<EpochMetrics> metrics;
  int best_epoch = 0;
  bool diverged = false;
};

// Epoch loop: seeded shuffle, mini-batch Adam, validation HR@5 (both tasks
// pooled) after each epoch, best-validation checkpoint kept. Non-finite loss
// aborts the loop with the last good checkpoint retained.
TrainResult train(const std::vector<samples::TrainingSample>& training_samples,
                  const std::vector<samples::EvalSample>& validation_samples,
                  const Catalog& catalog, const samples::UserCategoryGraph& graph,
                  const model::HyperParams& hp, const TrainConfig& config);

}  // namespace ccdf::train

#endif  // CCDF_TRAIN_HPP_
