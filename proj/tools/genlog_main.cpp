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
//
// Synthetic behavior-log generator for fixtures and benchmarks.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ccdf/synth.hpp"
#include "ccdf/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic behavior log generator"};

  std::string kind = "market";
  std::string out;
  int users = -1, categories = -1, days = -1, events = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;

  app.add_option("--kind", kind, "cyclic or market")
      ->check(CLI::IsMember({"cyclic", "market"}));
  app.add_option("--out", out, "output CSV path")->required();
  app.add_option("--users", users, "number of users");
  app.add_option("--categories", categories, "number of categories");
  app.add_option("--days", days, "number of days");
  app.add_option("--events", events, "events per user (cyclic) / max events (market)");
  app.add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_set = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<ccdf::Interaction> log;
    if (kind == "cyclic") {
      ccdf::synth::CyclicConfig cfg;
      if (users > 0) cfg.users = users;
      if (categories > 0) cfg.categories = categories;
      if (days > 0) cfg.days = days;
      if (events > 0) cfg.events_per_user = events;
      if (seed_set) cfg.seed = seed;
      log = ccdf::synth::cyclic_dataset(cfg);
    } else {
      ccdf::synth::MarketConfig cfg;
      if (users > 0) cfg.users = users;
      if (categories > 0) cfg.categories = categories;
      if (days > 0) cfg.days = days;
      if (events > 0) cfg.max_events = events;
      if (seed_set) cfg.seed = seed;
      log = ccdf::synth::market_dataset(cfg);
    }
    ccdf::synth::write_log_csv(out, log);
    std::fprintf(stderr, "genlog: kind=%s rows=%zu -> %s\n", kind.c_str(), log.size(),
                 out.c_str());
    return 0;
  } catch (const ccdf::CcdfError& e) {
    std::cerr << "error: " << e.tag() << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return static_cast<int>(ccdf::ErrorCode::kInternal);
  }
}
