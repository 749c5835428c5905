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

#include "ccdf/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <vector>

#include "json.hpp"

namespace ccdf::model {
namespace {

constexpr char kMagic[8] = {'D', 'U', '2', 'C', 0, 0, 0, 1};
constexpr int kVersion = 1;

using TensorFn =
    std::function<void(const std::string&, Eigen::Index, Eigen::Index, double*)>;

// Visits every tensor in a fixed order. Mat storage is row-major and Vec is
// contiguous, so (rows, cols, data) describes each tensor exactly as it lands
// in the blob.
void visit_tensors(ModelParams& p, const TensorFn& fn) {
  auto mat = [&fn](const std::string& name, Mat& m) { fn(name, m.rows(), m.cols(), m.data()); };
  auto vec = [&fn](const std::string& name, Vec& v) { fn(name, 1, v.cols(), v.data()); };
  mat("item_emb", p.item_emb);
  mat("cat_emb", p.cat_emb);
  mat("cross_emb", p.cross_emb);
  mat("prof_emb", p.prof_emb);
  for (std::size_t h = 0; h < p.wq.size(); ++h) mat("wq." + std::to_string(h), p.wq[h]);
  for (std::size_t h = 0; h < p.wk.size(); ++h) mat("wk." + std::to_string(h), p.wk[h]);
  for (std::size_t h = 0; h < p.wv.size(); ++h) mat("wv." + std::to_string(h), p.wv[h]);
  mat("wo", p.wo);
  mat("w1", p.w1);
  vec("b1", p.b1);
  mat("w2", p.w2);
  vec("b2", p.b2);
  mat("w3", p.w3);
  vec("b3", p.b3);
  mat("w4", p.w4);
  vec("b4", p.b4);
  vec("wide_w", p.wide_w);
  fn("wide_b", 1, 1, &p.wide_b);
}

nlohmann::json hparams_json(const HyperParams& hp) {
  return {{"history_cap", hp.history_cap}, {"d_model", hp.d_model},
          {"d_cat_in", hp.d_cat_in},       {"d_cross", hp.d_cross},
          {"d_prof", hp.d_prof},           {"heads", hp.heads},
          {"d_head", hp.d_head},           {"d_match", hp.d_match},
          {"ffn_hidden", hp.ffn_hidden}};
}

HyperParams hparams_from_json(const nlohmann::json& j) {
  HyperParams hp;
  hp.history_cap = j.at("history_cap");
  hp.d_model = j.at("d_model");
  hp.d_cat_in = j.at("d_cat_in");
  hp.d_cross = j.at("d_cross");
  hp.d_prof = j.at("d_prof");
  hp.heads = j.at("heads");
  hp.d_head = j.at("d_head");
  hp.d_match = j.at("d_match");
  hp.ffn_hidden = j.at("ffn_hidden");
  return hp;
}

}  // namespace

void save_checkpoint(const ModelParams& params, const std::string& path) {
  ModelParams copy = params;

  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["hparams"] = hparams_json(params.hp);
  manifest["n_items"] = params.item_emb.rows();
  manifest["n_categories"] = params.cat_emb.rows();

  std::vector<float> blob;
  nlohmann::json tensors = nlohmann::json::array();
  visit_tensors(copy, [&](const std::string& name, Eigen::Index rows, Eigen::Index cols,
                          double* data) {
    tensors.push_back({{"name", name},
                       {"shape", {rows, cols}},
                       {"dtype", "f32"},
                       {"offset", blob.size() * sizeof(float)}});
    for (Eigen::Index i = 0; i < rows * cols; ++i) blob.push_back(static_cast<float>(data[i]));
  });
  manifest["tensors"] = tensors;

  std::string text = manifest.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw CcdfError(ErrorCode::kModel, "checkpoint-unwritable", "cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  std::uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(reinterpret_cast<const char*>(blob.data()),
            static_cast<std::streamsize>(blob.size() * sizeof(float)));
  if (!out)
    throw CcdfError(ErrorCode::kModel, "checkpoint-unwritable", "short write to " + path);
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CcdfError(ErrorCode::kModel, "missing-checkpoint", "cannot open " + path);

  char magic[8];
  if (!in.read(magic, sizeof(magic)))
    throw CcdfError(ErrorCode::kModel, "checkpoint-truncated", "file shorter than header");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw CcdfError(ErrorCode::kModel, "checkpoint-magic", "not a checkpoint file");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CcdfError(ErrorCode::kModel, "checkpoint-version", "unsupported checkpoint version");

  std::uint64_t len = 0;
  if (!in.read(reinterpret_cast<char*>(&len), sizeof(len)))
    throw CcdfError(ErrorCode::kModel, "checkpoint-truncated", "missing manifest length");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len)))
    throw CcdfError(ErrorCode::kModel, "checkpoint-truncated", "missing manifest");

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CcdfError(ErrorCode::kModel, "checkpoint-manifest", e.what());
  }
  if (manifest.at("version").get<int>() != kVersion)
    throw CcdfError(ErrorCode::kModel, "checkpoint-version", "unsupported manifest version");

  ModelParams params;
  try {
    params.hp = hparams_from_json(manifest.at("hparams"));
    params.hp.validate();
  } catch (const nlohmann::json::exception& e) {
    throw CcdfError(ErrorCode::kModel, "checkpoint-manifest", e.what());
  }
  int n_items = manifest.at("n_items");
  int n_categories = manifest.at("n_categories");
  // Shape the parameter set, then overwrite every tensor from the blob.
  params = init_params(params.hp, n_items, n_categories, 0);

  std::vector<char> blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::uint64_t expected = 0;
  std::size_t tensor_i = 0;
  const auto& tensors = manifest.at("tensors");
  visit_tensors(params, [&](const std::string& name, Eigen::Index rows, Eigen::Index cols,
                            double* data) {
    if (tensor_i >= tensors.size())
      throw CcdfError(ErrorCode::kModel, "checkpoint-manifest", "missing tensor " + name);
    const auto& t = tensors.at(tensor_i++);
    if (t.at("name") != name || t.at("dtype") != "f32")
      throw CcdfError(ErrorCode::kModel, "checkpoint-manifest",
                      "unexpected tensor entry for " + name);
    const auto& shape = t.at("shape");
    if (shape.at(0).get<Eigen::Index>() != rows || shape.at(1).get<Eigen::Index>() != cols)
      throw CcdfError(ErrorCode::kModel, "checkpoint-manifest", "shape mismatch for " + name);
    std::uint64_t offset = t.at("offset");
    std::uint64_t bytes = static_cast<std::uint64_t>(rows * cols) * sizeof(float);
    if (offset != expected)
      throw CcdfError(ErrorCode::kModel, "checkpoint-manifest", "bad offset for " + name);
    expected += bytes;
    if (offset + bytes > blob.size())
      throw CcdfError(ErrorCode::kModel, "checkpoint-size-mismatch",
                      "blob shorter than manifest for " + name);
    const float* src = reinterpret_cast<const float*>(blob.data() + offset);
    for (Eigen::Index i = 0; i < rows * cols; ++i) data[i] = static_cast<double>(src[i]);
  });
  if (expected != blob.size())
    throw CcdfError(ErrorCode::kModel, "checkpoint-size-mismatch",
                    "blob length disagrees with manifest");
  return params;
}

}  // namespace ccdf::model
