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

#include "ccdf/config.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"

using namespace ccdf;
using testutil::TempDir;
using testutil::write_file;

namespace {

const std::vector<std::string> kKeys = {"a.x", "a.y", "b.flag", "b.list", "b.name"};

}  // namespace

TEST_CASE("config parses key = value lines with comments") {
  TempDir dir("ccdf-config");
  write_file(dir / "cfg",
             "# leading comment\n"
             "a.x = 5\n"
             "a.y = 2.5   # trailing comment\n"
             "\n"
             "b.flag = true\n"
             "b.list = 5, 15,30\n"
             "b.name = hello\n");
  auto cfg = config::Config::from_file((dir / "cfg").string(), kKeys);
  CHECK(cfg.get_int("a.x", 0) == 5);
  CHECK(cfg.get_double("a.y", 0.0) == doctest::Approx(2.5));
  CHECK(cfg.get_bool("b.flag", false));
  CHECK(cfg.get_int_list("b.list", {}) == std::vector<int>{5, 15, 30});
  CHECK(cfg.get_string("b.name", "") == "hello");
  CHECK(cfg.has("a.x"));
  CHECK(!cfg.has("a.z"));
  CHECK(cfg.get_int("a.z", 42) == 42);
}

TEST_CASE("config error handling") {
  TempDir dir("ccdf-config");
  ErrorCode code;

  SUBCASE("unreadable file") {
    CHECK(testutil::thrown_tag(
              [&] { config::Config::from_file((dir / "none").string(), kKeys); }, &code) ==
          "unreadable-config");
    CHECK(code == ErrorCode::kConfig);
  }
  SUBCASE("unknown key") {
    write_file(dir / "cfg", "nope.key = 1\n");
    CHECK(testutil::thrown_tag(
              [&] { config::Config::from_file((dir / "cfg").string(), kKeys); }) ==
          "unknown-config-key");
  }
  SUBCASE("line without equals") {
    write_file(dir / "cfg", "a.x\n");
    CHECK(testutil::thrown_tag(
              [&] { config::Config::from_file((dir / "cfg").string(), kKeys); }) ==
          "bad-config-line");
  }
  SUBCASE("bad typed value") {
    write_file(dir / "cfg", "a.x = soon\n");
    auto cfg = config::Config::from_file((dir / "cfg").string(), kKeys);
    CHECK(testutil::thrown_tag([&] { cfg.get_int("a.x", 0); }, &code) == "bad-config-value");
    CHECK(code == ErrorCode::kConfig);
  }
  SUBCASE("missing required key") {
    auto cfg = config::Config::from_entries({}, kKeys);
    CHECK(testutil::thrown_tag([&] { cfg.require_string("b.name"); }) == "missing-config-key");
    CHECK(testutil::thrown_tag([&] { cfg.require_int("a.x"); }) == "missing-config-key");
  }
  SUBCASE("set rejects unknown keys") {
    auto cfg = config::Config::from_entries({}, kKeys);
    CHECK(testutil::thrown_tag([&] { cfg.set("zzz", "1"); }) == "unknown-config-key");
  }
}

TEST_CASE("config echo is sorted and fully resolved") {
  auto cfg = config::Config::from_entries({{"b.flag", "false"}, {"a.x", "3"}}, kKeys);
  cfg.set("a.y", "1.5");
  CHECK(cfg.echo() == "a.x = 3\na.y = 1.5\nb.flag = false\n");
}
