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

#ifndef CCDF_SYNTH_HPP_
#define CCDF_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ccdf/types.hpp"

namespace ccdf::synth {

inline constexpr Timestamp kDay = 86400;

// Deterministic next-category process: each user's category at step k is
// (category at k-1 + 1) mod `categories`. Events are spread uniformly across
// `days` days starting at t=1.
struct CyclicConfig {
  int users = 500;
  int events_per_user = 50;
  int categories = 10;
  int items_per_category = 5;
  int days = 10;
  std::uint64_t seed = 7;
};

std::vector<Interaction> cyclic_dataset(const CyclicConfig& config);

// E-commerce-flavoured log with community structure over categories: users
// concentrate on a few favorite categories inside two communities and
// occasionally branch to unseen categories of the same communities, so
// non-interacted targets stay predictable from the history.
struct MarketConfig {
  int users = 6000;
  int categories = 200;
  int communities = 10;
  int items_per_category = 50;
  int days = 12;
  int min_events = 60;
  int max_events = 180;
  std::uint64_t seed = 11;
};

std::vector<Interaction> market_dataset(const MarketConfig& config);

// The 5-column CSV the parser reads back.
void write_log_csv(const std::string& path, const std::vector<Interaction>& interactions);

}  // namespace ccdf::synth

#endif  // CCDF_SYNTH_HPP_
