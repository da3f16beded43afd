// Copyright 2026 The spreadopt Authors
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

#include <cmath>

#include "doctest.h"
#include "spreadopt/run_config.hpp"

namespace spreadopt {
namespace {

TEST_CASE("parse a full configuration") {
  const auto c = RunConfig::Parse(
      "# one chip from each of 25 codes\n"
      "n = 127\n"
      "m = 66\n"
      "block_size = 25\n"
      "max_active_cols = 25\n"
      "max_per_col = 1\n"
      "init = random\n"
      "seed = 42\n"
      "time_limit = 600\n"
      "solver = bnb\n"
      "\n"
      "out = r1\n");
  CHECK(*c.n == 127);
  CHECK(*c.m == 66);
  CHECK(c.bcd.strategy.block_size == 25);
  CHECK(c.bcd.strategy.max_active_columns == 25);
  CHECK(c.bcd.strategy.max_per_column == 1);
  CHECK(c.init.kind == Initializer::Kind::kRandom);
  CHECK(c.bcd.seed == 42);
  CHECK(c.bcd.time_limit_s == 600.0);
  CHECK(c.bcd.solver == SolverChoice::kBranchAndBound);
  CHECK(c.bcd.output_dir == "r1");
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("defaults and round trip") {
  RunConfig c;
  c.set("n", "31");
  c.set("m", "8");
  CHECK(std::isinf(c.bcd.time_limit_s));
  CHECK(c.bcd.max_iterations == 100000);
  c.set("time_limit", "none");
  c.set("threads", "2");
  c.set("enum_cap", "16");
  c.set("patience", "7");
  const auto again = RunConfig::Parse(c.to_text());
  CHECK(again.to_text() == c.to_text());
  CHECK(again.bcd.solver_options.threads == 2);
  CHECK(again.bcd.solver_options.enumeration_cap == 16);
  CHECK(again.bcd.patience == 7);
}

TEST_CASE("errors") {
  RunConfig c;
  CHECK_THROWS_AS(c.set("colour", "red"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("n", "12x"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("solver", "simplex"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("init", "sobol"), std::invalid_argument);
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::Parse("n 31\n"), std::invalid_argument);
  c.set("n", "31");
  c.set("m", "4");
  c.set("max_active_cols", "9");
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("every key is settable") {
  for (const auto& key : RunConfig::Keys()) {
    RunConfig c;
    std::string value = "3";
    if (key == "init") value = "gold";
    if (key == "solver") value = "enum";
    if (key == "out") value = "dir";
    CHECK_NOTHROW(c.set(key, value));
  }
}

}  // namespace
}  // namespace spreadopt
