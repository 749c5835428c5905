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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "test_util.hpp"

using namespace ccdf;
using testutil::TempDir;

namespace {

model::HyperParams small_hp() {
  model::HyperParams hp;
  hp.history_cap = 4;
  hp.d_model = 8;
  hp.d_cat_in = 6;
  hp.d_cross = 3;
  hp.d_prof = 2;
  hp.heads = 2;
  hp.d_head = 4;
  hp.d_match = 4;
  hp.ffn_hidden = 5;
  return hp;
}

}  // namespace

TEST_CASE("checkpoint round-trips bitwise at float32 precision") {
  TempDir dir("ccdf-ckpt");
  auto params = model::init_params(small_hp(), 9, 4, 77);
  params.wide_b = 0.125;  // exactly representable

  auto path = (dir / "model.du2c").string();
  model::save_checkpoint(params, path);
  auto loaded = model::load_checkpoint(path);

  CHECK(loaded.hp == params.hp);
  CHECK(loaded.item_emb.rows() == 9);
  CHECK(loaded.cat_emb.rows() == 4);
  CHECK(loaded.wide_b == 0.125);
  // Values pass through float32; saving the loaded params must be identical.
  auto path2 = (dir / "model2.du2c").string();
  model::save_checkpoint(loaded, path2);
  CHECK(testutil::read_file(path) == testutil::read_file(path2));
  // And a second load is bit-identical to the first.
  auto loaded2 = model::load_checkpoint(path2);
  CHECK((loaded.item_emb.array() == loaded2.item_emb.array()).all());
  CHECK((loaded.wo.array() == loaded2.wo.array()).all());
  for (int h = 0; h < loaded.hp.heads; ++h)
    CHECK((loaded.wq[h].array() == loaded2.wq[h].array()).all());
}

TEST_CASE("checkpoint load failure modes") {
  TempDir dir("ccdf-ckpt");
  auto params = model::init_params(small_hp(), 3, 2, 1);
  auto path = (dir / "model.du2c").string();
  model::save_checkpoint(params, path);
  std::string good = testutil::read_file(path);

  SUBCASE("missing file") {
    ErrorCode code;
    CHECK(testutil::thrown_tag(
              [&] { model::load_checkpoint((dir / "none.du2c").string()); }, &code) ==
          "missing-checkpoint");
    CHECK(code == ErrorCode::kModel);
  }
  SUBCASE("bad magic") {
    std::string bad = good;
    bad[0] = 'X';
    testutil::write_file(dir / "bad.du2c", bad);
    CHECK(testutil::thrown_tag([&] { model::load_checkpoint((dir / "bad.du2c").string()); }) ==
          "checkpoint-magic");
  }
  SUBCASE("bad version") {
    std::string bad = good;
    bad[7] = 9;
    testutil::write_file(dir / "bad.du2c", bad);
    CHECK(testutil::thrown_tag([&] { model::load_checkpoint((dir / "bad.du2c").string()); }) ==
          "checkpoint-version");
  }
  SUBCASE("truncated blob") {
    testutil::write_file(dir / "bad.du2c", good.substr(0, good.size() - 13));
    CHECK(testutil::thrown_tag([&] { model::load_checkpoint((dir / "bad.du2c").string()); }) ==
          "checkpoint-size-mismatch");
  }
  SUBCASE("truncated header") {
    testutil::write_file(dir / "bad.du2c", good.substr(0, 6));
    CHECK(testutil::thrown_tag([&] { model::load_checkpoint((dir / "bad.du2c").string()); }) ==
          "checkpoint-truncated");
  }
  SUBCASE("unwritable path") {
    CHECK(testutil::thrown_tag([&] {
            model::save_checkpoint(params, (dir / "no-such-dir" / "m.du2c").string());
          }) == "checkpoint-unwritable");
  }
}
