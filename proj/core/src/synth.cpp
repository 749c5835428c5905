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

#include "ccdf/synth.hpp"

#include <algorithm>
#include <fstream>

#include "ccdf/rng.hpp"

namespace ccdf::synth {
namespace {

Behavior draw_behavior(std::mt19937_64& rng) {
  double u = uniform_unit(rng);
  if (u < 0.85) return Behavior::kView;
  if (u < 0.91) return Behavior::kCart;
  if (u < 0.96) return Behavior::kFavorite;
  return Behavior::kPurchase;
}

}  // namespace

std::vector<Interaction> cyclic_dataset(const CyclicConfig& config) {
  std::vector<Interaction> events;
  events.reserve(static_cast<std::size_t>(config.users) *
                 static_cast<std::size_t>(config.events_per_user));
  const Timestamp span = static_cast<Timestamp>(config.days) * kDay;
  for (int u = 0; u < config.users; ++u) {
    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(u)));
    int category = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(config.categories)));
    for (int e = 0; e < config.events_per_user; ++e) {
      category = (category + 1) % config.categories;
      int item_slot =
          static_cast<int>(uniform_index(rng, static_cast<std::size_t>(config.items_per_category)));
      Interaction ev;
      ev.user_id = u + 1;
      ev.category_id = category;
      ev.item_id = 1000 + static_cast<ItemId>(category) * config.items_per_category + item_slot;
      ev.behavior = draw_behavior(rng);
      // Uniform spread across the whole window keeps every day populated.
      ev.timestamp = 1 + (static_cast<Timestamp>(e) * span) / config.events_per_user;
      events.push_back(ev);
    }
  }
  return events;
}

std::vector<Interaction> market_dataset(const MarketConfig& config) {
  const int community_size = config.categories / config.communities;
  const Timestamp span = static_cast<Timestamp>(config.days) * kDay;
  std::vector<Interaction> events;

  for (int u = 0; u < config.users; ++u) {
    std::mt19937_64 rng(derive_seed(config.seed, 0xA000000 + static_cast<std::uint64_t>(u)));
    int n_events =
        config.min_events +
        static_cast<int>(uniform_index(
            rng, static_cast<std::size_t>(config.max_events - config.min_events + 1)));

    // Two home communities and a handful of favorite categories inside them.
    int com_a = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(config.communities)));
    int com_b = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(config.communities)));
    auto community_category = [&](int com) {
      return com * community_size +
             static_cast<int>(uniform_index(rng, static_cast<std::size_t>(community_size)));
    };
    std::vector<int> favorites;
    for (int f = 0; f < 5; ++f) favorites.push_back(community_category(f % 2 == 0 ? com_a : com_b));

    // Chronological order: draw all timestamps first, then walk them.
    std::vector<Timestamp> times;
    times.reserve(static_cast<std::size_t>(n_events));
    for (int e = 0; e < n_events; ++e)
      times.push_back(1 + static_cast<Timestamp>(uniform_unit(rng) * static_cast<double>(span - 2)));
    std::sort(times.begin(), times.end());

    for (int e = 0; e < n_events; ++e) {
      double roll = uniform_unit(rng);
      int category;
      if (roll < 0.70) {
        // Favorites with a mild head bias.
        std::size_t pick = uniform_index(rng, favorites.size() * (favorites.size() + 1) / 2);
        std::size_t f = 0;
        std::size_t acc = favorites.size();
        while (pick >= acc) {
          ++f;
          acc += favorites.size() - f;
        }
        category = favorites[f];
      } else if (roll < 0.92) {
        category = community_category(uniform_unit(rng) < 0.5 ? com_a : com_b);
      } else {
        category =
            static_cast<int>(uniform_index(rng, static_cast<std::size_t>(config.categories)));
      }
      // Popularity-skewed item inside the category.
      int slot = static_cast<int>(static_cast<double>(config.items_per_category) *
                                  uniform_unit(rng) * uniform_unit(rng));
      if (slot >= config.items_per_category) slot = config.items_per_category - 1;

      Interaction ev;
      ev.user_id = u + 1;
      ev.category_id = category;
      ev.item_id = 1000 + static_cast<ItemId>(category) * config.items_per_category + slot;
      ev.behavior = draw_behavior(rng);
      ev.timestamp = times[static_cast<std::size_t>(e)];
      events.push_back(ev);
    }
  }
  return events;
}

void write_log_csv(const std::string& path, const std::vector<Interaction>& interactions) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CcdfError(ErrorCode::kData, "unwritable-file", "cannot write " + path);
  for (const auto& e : interactions) {
    out << e.user_id << ',' << e.item_id << ',' << e.category_id << ','
        << behavior_string(e.behavior) << ',' << e.timestamp << '\n';
  }
}

}  // namespace ccdf::synth
