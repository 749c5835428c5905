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

#ifndef CCDF_CHECKPOINT_HPP_
#define CCDF_CHECKPOINT_HPP_

#include <string>

#include "ccdf/model.hpp"

namespace ccdf::model {

// File layout: 8-byte magic "DU2C\0\0\0\1", little-endian 64-bit manifest
// length, JSON manifest (tensor names, shapes, offsets, hyperparameters),
// then a row-major little-endian float32 blob. Round trips are bitwise
// identical at 32-bit precision.
void save_checkpoint(const ModelParams& params, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

}  // namespace ccdf::model

#endif  // CCDF_CHECKPOINT_HPP_
